#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfmac/channel.hpp"
#include "cfmac/comp_rate.hpp"
#include "cfmac/dirty_mac.hpp"
#include "cfmac/expr.hpp"
#include "cfmac/io.hpp"
#include "cfmac/k_user.hpp"
#include "cfmac/two_user.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

// Number fields round-trip through the 12-digit form so reruns and the
// documented values are byte-identical.
json num(double v) {
    return json(cfmac::g12_value(v));
}

json manifest(const std::string& command, const std::map<std::string, std::string>& options) {
    json m;
    m["tool"] = "cfmac";
    m["version"] = kVersion;
    m["command"] = command;
    json opts = json::object();
    for (const auto& [k, v] : options) opts[k] = v;
    m["options"] = opts;
    return m;
}

void emit_json(const json& j) {
    std::cout << j.dump(2) << "\n";
}

std::string csv_manifest(const std::string& command,
                         const std::map<std::string, std::string>& options) {
    std::ostringstream os;
    os << "# cfmac-csv v1\n# manifest: command=" << command;
    for (const auto& [k, v] : options) os << ' ' << k << '=' << v;
    os << " version=" << kVersion << "\n";
    return os.str();
}

int cmd_compute_rate(const std::string& h_raw, const std::string& p_raw,
                     const std::string& a_raw, const std::string& beta_raw, int max_coeff) {
    const std::vector<double> h = cfmac::parse_real_list(h_raw);
    const double P = cfmac::parse_expression(p_raw);
    const std::vector<int> a_vals = cfmac::parse_int_list(a_raw);
    std::vector<double> beta_vals(h.size(), 1.0);
    if (!beta_raw.empty()) beta_vals = cfmac::parse_real_list(beta_raw);

    const cfmac::ChannelConfig cfg(h, P);
    const cfmac::SumCoefficients a(a_vals, max_coeff);
    const cfmac::ScalingVector beta(beta_vals);

    const double alpha_star = cfmac::optimal_alpha(cfg, a, beta);
    const double noise = cfmac::equivalent_noise_power(cfg, a, beta, alpha_star);
    const cfmac::RateTuple t = cfmac::computation_rate_tuple(cfg, a, beta);

    json out;
    out["schema"] = "cfmac-compute-rate-v1";
    out["manifest"] = manifest("compute-rate", {{"h", h_raw},
                                                {"p", p_raw},
                                                {"a", a_raw},
                                                {"beta", beta_raw.empty() ? "1 (default)" : beta_raw}});
    out["alpha_star"] = num(alpha_star);
    out["noise_power"] = num(noise);
    json rates = json::array(), binding = json::array(), clamped = json::array();
    for (std::size_t k = 0; k < cfg.users(); ++k) {
        binding.push_back(t.binding[k]);
        if (a.a[k] == 0) {
            rates.push_back(nullptr);
            clamped.push_back(false);
        } else {
            rates.push_back(num(t.rates[k]));
            clamped.push_back(cfmac::computation_rate_preclamp(cfg, a, beta, k) < 0.0);
        }
    }
    out["rates"] = rates;
    out["binding"] = binding;
    out["clamped"] = clamped;
    emit_json(out);
    return 0;
}

int cmd_two_user(const std::string& h1_raw, const std::string& h2_raw, const std::string& p_raw,
                 std::size_t samples, const std::string& choices) {
    const double h1 = cfmac::parse_expression(h1_raw);
    const double h2 = cfmac::parse_expression(h2_raw);
    const double P = cfmac::parse_expression(p_raw);
    const cfmac::ChannelConfig cfg({h1, h2}, P);

    std::ostringstream os;
    os << csv_manifest("two-user", {{"choices", choices},
                                    {"h1", h1_raw},
                                    {"h2", h2_raw},
                                    {"p", p_raw},
                                    {"samples", std::to_string(samples)}});
    os << "beta2,R1,R2,binding1,binding2,case\n";

    const cfmac::FaceSweep sweep = cfmac::dominant_face_sweep_detail(cfg, samples);
    const char* case_name = cfmac::to_string(sweep.label.label);
    if (sweep.label.label == cfmac::TwoUserCase::I) {
        os << ",,,,,I\n";
        std::cout << os.str();
        std::cerr << "two-user: the face is out of reach at these parameters (case I)\n";
        return 3;
    }
    std::vector<const cfmac::FacePoint*> rows;
    for (const cfmac::FacePoint& p : sweep.points) {
        if (choices == "a1" && p.choice != "A1") continue;
        if (choices == "a2" && p.choice != "A2") continue;
        rows.push_back(&p);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const cfmac::FacePoint* x, const cfmac::FacePoint* y) {
                         if (x->beta2 != y->beta2) return x->beta2 < y->beta2;
                         return x->choice < y->choice;
                     });
    for (const cfmac::FacePoint* p : rows) {
        os << cfmac::to_g12(p->beta2) << ',' << cfmac::to_g12(p->rates[0]) << ','
           << cfmac::to_g12(p->rates[1]) << ',' << p->binding[0] << ',' << p->binding[1] << ','
           << case_name << "\n";
    }
    std::cout << os.str();
    return 0;
}

int cmd_k_user(const std::string& h_raw, const std::string& p_raw, const std::string& matrix_raw,
               const std::string& beta_raw, bool check_identity, bool family,
               const std::string& grid_raw, bool include_extra) {
    const std::vector<double> h = cfmac::parse_real_list(h_raw);
    const double P = cfmac::parse_expression(p_raw);
    const cfmac::ChannelConfig cfg(h, P);

    if (family) {
        const std::vector<double> grid = cfmac::parse_sweep(grid_raw);
        std::vector<std::array<double, 2>> pairs;
        for (double b2 : grid)
            for (double b3 : grid) pairs.push_back({b2, b3});
        const cfmac::RegionCurve rc = cfmac::three_user_family_sweep(cfg, pairs, include_extra);
        json out;
        out["schema"] = "cfmac-three-user-family-v1";
        out["manifest"] = manifest("k-user", {{"beta-grid", grid_raw},
                                              {"family", "1"},
                                              {"h", h_raw},
                                              {"include-extra", include_extra ? "1" : "0"},
                                              {"p", p_raw}});
        json pts = json::array();
        for (const auto& p : rc.points) {
            json row = json::array();
            for (double v : p) row.push_back(num(v));
            pts.push_back(row);
        }
        out["points"] = pts;
        emit_json(out);
        return 0;
    }

    // rows separated by ';', entries by ','
    std::vector<int> entries;
    std::size_t n_rows = 0;
    {
        std::string rest = matrix_raw;
        while (!rest.empty()) {
            const std::size_t semi = rest.find(';');
            const std::string row = rest.substr(0, semi);
            const std::vector<int> vals = cfmac::parse_int_list(row);
            entries.insert(entries.end(), vals.begin(), vals.end());
            ++n_rows;
            if (semi == std::string::npos) break;
            rest = rest.substr(semi + 1);
        }
    }
    if (n_rows != cfg.users() || entries.size() != n_rows * n_rows)
        throw cfmac::domain_error("k-user: matrix must be square with one row per user");

    std::vector<double> beta_vals(cfg.users(), 1.0);
    if (!beta_raw.empty()) beta_vals = cfmac::parse_real_list(beta_raw);

    const cfmac::CoefficientMatrix A(cfg.users(), entries);
    const cfmac::ScalingVector beta(beta_vals);
    const cfmac::RateTuple t = cfmac::message_rates_k(cfg, A, beta);
    const cfmac::Matrix L = cfmac::cholesky_lower(cfmac::noise_covariance_p_free(cfg, A, beta));

    json out;
    out["schema"] = "cfmac-k-user-v1";
    out["manifest"] = manifest("k-user", {{"beta", beta_raw.empty() ? "1 (default)" : beta_raw},
                                          {"h", h_raw},
                                          {"matrix", matrix_raw},
                                          {"p", p_raw}});
    json rates = json::array(), binding = json::array(), ldiag = json::array();
    for (std::size_t k = 0; k < cfg.users(); ++k) {
        rates.push_back(num(t.rates[k]));
        binding.push_back(t.binding[k]);
        ldiag.push_back(num(L(k, k)));
    }
    out["rates"] = rates;
    out["binding"] = binding;
    out["L_diag"] = ldiag;
    out["det_A"] = A.det;
    if (check_identity)
        out["sum_rate_residual"] = num(cfmac::sum_rate_identity_residual(cfg, A, beta));
    emit_json(out);
    return 0;
}

int cmd_sym_capacity(const std::string& k_raw, const std::string& p_raw) {
    std::size_t k_lo, k_hi;
    const std::size_t dots = k_raw.find("..");
    if (dots == std::string::npos) {
        k_lo = k_hi = static_cast<std::size_t>(std::stoul(k_raw));
    } else {
        k_lo = static_cast<std::size_t>(std::stoul(k_raw.substr(0, dots)));
        k_hi = static_cast<std::size_t>(std::stoul(k_raw.substr(dots + 2)));
    }
    if (k_lo < 2 || k_hi < k_lo || k_hi > 8)
        throw cfmac::domain_error("sym-capacity: k range must lie in [2, 8]");
    const double P = cfmac::parse_expression(p_raw);

    std::ostringstream os;
    os << csv_manifest("sym-capacity", {{"k", k_raw}, {"p", p_raw}});
    os << "k,p,feasible,sym_rate,betas\n";
    for (std::size_t K = k_lo; K <= k_hi; ++K) {
        const cfmac::EqualizeResult r = cfmac::sym_equalize_betas(K, P);
        os << K << ',' << cfmac::to_g12(P) << ',' << (r.found ? 1 : 0) << ','
           << cfmac::to_g12(cfmac::symmetric_capacity(K, P)) << ',';
        if (r.found) {
            os << "1";
            for (double b : r.beta_tail) os << ';' << cfmac::to_g12(b);
        }
        os << "\n";
    }
    std::cout << os.str();
    return 0;
}

int cmd_p_star(std::size_t K, const std::string& tol_raw, double ceiling) {
    const double tol = cfmac::parse_expression(tol_raw);
    cfmac::PStarBracket b;
    try {
        b = cfmac::p_star(K, tol, ceiling);
    } catch (const cfmac::numeric_error& e) {
        std::cerr << "p-star: " << e.what() << "\n";
        return 3;
    }
    json out;
    out["schema"] = "cfmac-p-star-v1";
    out["manifest"] = manifest("p-star", {{"ceiling", cfmac::to_g12(ceiling)},
                                          {"k", std::to_string(K)},
                                          {"tol", tol_raw}});
    out["k"] = K;
    out["tol"] = num(tol);
    out["lo"] = num(b.lo);
    out["hi"] = num(b.hi);
    emit_json(out);
    return 0;
}

int cmd_dirty_region(const std::string& p_raw, const std::string& q_raw, int max_coeff,
                     std::uint64_t budget) {
    const std::vector<double> pv = cfmac::parse_real_list(p_raw);
    const std::vector<double> qv = cfmac::parse_real_list(q_raw);
    if (pv.size() != 2 || qv.size() != 2)
        throw cfmac::domain_error("dirty-region: need two powers and two variances");
    const cfmac::DirtyConfig cfg({pv[0], pv[1]}, {qv[0], qv[1]});
    const std::vector<cfmac::DirtyRegionPoint> boundary =
        cfmac::dirty_region_sweep_detail(cfg, max_coeff, budget);

    std::ostringstream os;
    os << csv_manifest("dirty-region", {{"budget", std::to_string(budget)},
                                        {"max-coeff", std::to_string(max_coeff)},
                                        {"p", p_raw},
                                        {"q", q_raw}});
    os << "R1,R2,source\n";
    for (const auto& p : boundary)
        os << cfmac::to_g12(p.r1) << ',' << cfmac::to_g12(p.r2) << ',' << p.source << "\n";
    std::cout << os.str();
    return 0;
}

int cmd_dirty_symmetric(const std::string& p_raw, const std::string& alpha_raw,
                        std::uint64_t budget) {
    const double P = cfmac::parse_expression(p_raw);
    const std::vector<double> alphas = cfmac::parse_sweep(alpha_raw);
    const std::vector<cfmac::SymmetricComparisonPoint> rows =
        cfmac::dirty_symmetric_sweep(P, alphas, budget);

    std::ostringstream os;
    os << csv_manifest("dirty-symmetric", {{"alpha", alpha_raw},
                                           {"budget", std::to_string(budget)},
                                           {"p", p_raw}});
    os << "alpha,single_sum,two_sum,upper_bound\n";
    for (const auto& r : rows)
        os << cfmac::to_g12(r.alpha) << ',' << cfmac::to_g12(r.single_sum) << ','
           << cfmac::to_g12(r.two_sum) << ',' << cfmac::to_g12(r.upper_bound) << "\n";
    std::cout << os.str();
    return 0;
}

int cmd_dirty_rate(const std::string& p_raw, const std::string& q_raw, const std::string& a_raw,
                   const std::string& b_raw, const std::string& beta_raw,
                   const std::string& gamma_raw) {
    const std::vector<double> pv = cfmac::parse_real_list(p_raw);
    const std::vector<double> qv = cfmac::parse_real_list(q_raw);
    const std::vector<int> av = cfmac::parse_int_list(a_raw);
    const std::vector<int> bv = cfmac::parse_int_list(b_raw);
    const std::vector<double> betav = cfmac::parse_real_list(beta_raw);
    const std::vector<double> gammav = cfmac::parse_real_list(gamma_raw);
    if (pv.size() != 2 || qv.size() != 2 || av.size() != 2 || bv.size() != 2 ||
        betav.size() != 2 || gammav.size() != 2)
        throw cfmac::domain_error("dirty-rate: all vectors have two entries");

    const cfmac::DirtyConfig cfg({pv[0], pv[1]}, {qv[0], qv[1]});
    const cfmac::TwoSumChoice choice({av[0], av[1]}, {bv[0], bv[1]});
    const cfmac::DirtyParams params({gammav[0], gammav[1]}, {betav[0], betav[1]});

    const cfmac::FirstSumMin n1 = cfmac::minimize_first_sum_noise(cfg, choice.a, params);
    const cfmac::SecondSumMin n2 = cfmac::minimize_second_sum_noise(cfg, choice.a, choice.b, params);
    const cfmac::TwoSumRates r = cfmac::message_rates_dirty(cfg, choice, params);

    json out;
    out["schema"] = "cfmac-dirty-rate-v1";
    out["manifest"] = manifest("dirty-rate", {{"a", a_raw},
                                              {"b", b_raw},
                                              {"beta", beta_raw},
                                              {"gamma", gamma_raw},
                                              {"p", p_raw},
                                              {"q", q_raw}});
    out["first_noise"] = num(n1.value);
    out["alpha1"] = num(n1.alpha1);
    out["second_noise"] = num(n2.value);
    out["alpha2"] = num(n2.alpha2);
    out["lambda"] = num(n2.lambda);
    out["feasible"] = r.feasible;
    out["reason"] = r.reason;
    json rates = json::array(), binding = json::array();
    if (r.feasible) {
        for (int k = 0; k < 2; ++k) {
            rates.push_back(num(r.tuple.rates[k]));
            binding.push_back(r.tuple.binding[k]);
        }
    }
    out["rates"] = rates;
    out["binding"] = binding;
    emit_json(out);
    return r.feasible ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"achievable rates for lattice sum decoding on Gaussian multiple-access channels"};
    app.set_version_flag("--version", std::string("cfmac ") + kVersion);
    app.require_subcommand(1);

    std::function<int()> runner;

    // --h is a real option below, so subcommand help keeps only its long form
    auto add_cmd = [&app](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "print this help message and exit");
        return sub;
    };

    {
        auto* sub = add_cmd("compute-rate", "single-sum computation rates");
        auto h = std::make_shared<std::string>();
        auto p = std::make_shared<std::string>();
        auto a = std::make_shared<std::string>();
        auto beta = std::make_shared<std::string>();
        auto max_coeff = std::make_shared<int>(16);
        sub->add_option("--h", *h, "channel gains, comma separated")->required();
        sub->add_option("--p", *p, "common transmit power")->required();
        sub->add_option("--a", *a, "integer sum coefficients")->required();
        sub->add_option("--beta", *beta, "per-user scalings, default all ones");
        sub->add_option("--max-coeff", *max_coeff, "coefficient magnitude cap");
        sub->callback([=, &runner] {
            runner = [=] { return cmd_compute_rate(*h, *p, *a, *beta, *max_coeff); };
        });
    }
    {
        auto* sub = add_cmd("two-user", "dominant-face sweep for two users");
        auto h1 = std::make_shared<std::string>();
        auto h2 = std::make_shared<std::string>();
        auto p = std::make_shared<std::string>();
        auto samples = std::make_shared<std::size_t>(512);
        auto choices = std::make_shared<std::string>("both");
        sub->add_option("--h1", *h1, "gain of user 1")->required();
        sub->add_option("--h2", *h2, "gain of user 2")->required();
        sub->add_option("--p", *p, "common transmit power")->required();
        sub->add_option("--samples", *samples, "samples per sum choice");
        sub->add_option("--choices", *choices, "both, a1 or a2")
            ->check(CLI::IsMember({"both", "a1", "a2"}));
        sub->callback([=, &runner] {
            runner = [=] { return cmd_two_user(*h1, *h2, *p, *samples, *choices); };
        });
    }
    {
        auto* sub = add_cmd("k-user", "successive decoding of K integer sums");
        auto h = std::make_shared<std::string>();
        auto p = std::make_shared<std::string>();
        auto matrix = std::make_shared<std::string>();
        auto beta = std::make_shared<std::string>();
        auto check = std::make_shared<bool>(false);
        auto family = std::make_shared<bool>(false);
        auto grid = std::make_shared<std::string>("0.5:0.25:2");
        auto extra = std::make_shared<bool>(false);
        sub->add_option("--h", *h, "channel gains, comma separated")->required();
        sub->add_option("--p", *p, "common transmit power")->required();
        sub->add_option("--matrix", *matrix, "rows 'a11,a12;a21,a22;...'");
        sub->add_flag("--check-identity", *check, "emit the sum-rate identity residual");
        sub->add_flag("--family", *family, "sweep the three-user ones-row family");
        sub->add_option("--beta-grid", *grid, "family mode scaling sweep lo:step:hi");
        sub->add_flag("--include-extra", *extra, "family mode: add the reordered shapes");
        sub->callback([=, &runner] {
            runner = [=] {
                if (!*family && matrix->empty())
                    throw cfmac::domain_error("k-user: --matrix is required without --family");
                return cmd_k_user(*h, *p, *matrix, *beta, *check, *family, *grid, *extra);
            };
        });
        sub->add_option("--beta", *beta, "per-user scalings, default all ones");
    }
    {
        auto* sub = add_cmd("sym-capacity", "equal-rate scalings on the ones channel");
        auto k = std::make_shared<std::string>();
        auto p = std::make_shared<std::string>();
        sub->add_option("--k", *k, "user count or range lo..hi")->required();
        sub->add_option("--p", *p, "common transmit power")->required();
        sub->callback([=, &runner] { runner = [=] { return cmd_sym_capacity(*k, *p); }; });
    }
    {
        auto* sub = add_cmd("p-star", "power threshold of the equal-rate scalings");
        auto k = std::make_shared<std::size_t>(0);
        auto tol = std::make_shared<std::string>("0.01");
        auto ceiling = std::make_shared<double>(100.0);
        sub->add_option("--k", *k, "user count")->required();
        sub->add_option("--tol", *tol, "bracket width, at least 1e-3");
        sub->add_option("--ceiling", *ceiling, "largest power probed");
        sub->callback([=, &runner] { runner = [=] { return cmd_p_star(*k, *tol, *ceiling); }; });
    }
    {
        auto* sub = add_cmd("dirty-region", "exchange boundary with known interference");
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        auto max_coeff = std::make_shared<int>(5);
        auto budget = std::make_shared<std::uint64_t>(2500);
        sub->add_option("--p", *p, "powers P1,P2")->required();
        sub->add_option("--q", *q, "interference variances Q1,Q2")->required();
        sub->add_option("--max-coeff", *max_coeff, "largest sum coefficient");
        sub->add_option("--budget", *budget, "evaluations per scaling search");
        sub->callback([=, &runner] {
            runner = [=] { return cmd_dirty_region(*p, *q, *max_coeff, *budget); };
        });
    }
    {
        auto* sub = add_cmd("dirty-symmetric",
                                       "symmetric-rate comparison against the single-sum scheme");
        auto p = std::make_shared<std::string>();
        auto alpha = std::make_shared<std::string>("0:0.5:4.5");
        auto budget = std::make_shared<std::uint64_t>(2500);
        sub->add_option("--p", *p, "common power")->required();
        sub->add_option("--alpha", *alpha, "interference ratio sweep lo:step:hi");
        sub->add_option("--budget", *budget, "evaluations per scaling search");
        sub->callback([=, &runner] {
            runner = [=] { return cmd_dirty_symmetric(*p, *alpha, *budget); };
        });
    }
    {
        auto* sub = add_cmd("dirty-rate", "one dirty-channel operating point");
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto beta = std::make_shared<std::string>();
        auto gamma = std::make_shared<std::string>();
        sub->add_option("--p", *p, "powers P1,P2")->required();
        sub->add_option("--q", *q, "interference variances Q1,Q2")->required();
        sub->add_option("--a", *a, "first sum coefficients")->required();
        sub->add_option("--b", *b, "second sum coefficients")->required();
        sub->add_option("--beta", *beta, "message scalings")->required();
        sub->add_option("--gamma", *gamma, "interference scalings")->required();
        sub->callback([=, &runner] {
            runner = [=] { return cmd_dirty_rate(*p, *q, *a, *b, *beta, *gamma); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return runner ? runner() : 2;
    } catch (const cfmac::degenerate_channel_error& e) {
        std::cerr << "cfmac: " << e.what() << "\n";
        return 3;
    } catch (const cfmac::singular_matrix_error& e) {
        std::cerr << "cfmac: " << e.what() << "\n";
        return 3;
    } catch (const cfmac::domain_error& e) {
        std::cerr << "cfmac: " << e.what() << "\n";
        return 2;
    } catch (const cfmac::numeric_error& e) {
        std::cerr << "cfmac: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "cfmac: " << e.what() << "\n";
        return 4;
    }
}
