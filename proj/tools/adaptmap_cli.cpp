// Command-line surface: every subcommand loads a config file, runs one library
// operation, and emits CSV or JSON with a provenance digest.

#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaptmap/chaos.hpp"
#include "adaptmap/config.hpp"
#include "adaptmap/io.hpp"
#include "adaptmap/map.hpp"
#include "adaptmap/orbits.hpp"
#include "adaptmap/parallel.hpp"
#include "adaptmap/singular.hpp"
#include "adaptmap/sweep.hpp"

using nlohmann::json;
using namespace adaptmap;

namespace {

struct common_opts {
    std::string config_path;
    double vr_override = std::numeric_limits<double>::quiet_NaN();
    double eps_override = std::numeric_limits<double>::quiet_NaN();
    std::string out_override;
    int workers = 1;
};

void add_common(CLI::App* cmd, common_opts& c) {
    cmd->add_option("--config", c.config_path, "config file (sections [model], [tolerances], [protocol], [output])")
        ->required();
    cmd->add_option("--vr", c.vr_override, "override v_reset");
    cmd->add_option("--eps", c.eps_override, "override eps");
    cmd->add_option("--out", c.out_override, "output path (default: config [output] path or stdout)");
    cmd->add_option("--workers", c.workers, "worker threads for grid-parallel operations");
}

run_config resolve(const common_opts& c) {
    run_config cfg = load_config_file(c.config_path);
    if (!std::isnan(c.vr_override)) {
        cfg.params.v_reset = c.vr_override;
        cfg.has_v_reset = true;
    }
    if (!std::isnan(c.eps_override)) cfg.params.eps = c.eps_override;
    if (!cfg.has_v_reset)
        throw domain_error("v_reset is required: set [model] v_reset or pass --vr");
    if (!c.out_override.empty()) cfg.output.path = c.out_override;
    cfg.protocol.workers = c.workers;
    return cfg;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json attractor_json(const attractor_result& a) {
    json j;
    switch (a.kind) {
        case attractor_kind::fixed_point: j["kind"] = "fixed_point"; break;
        case attractor_kind::periodic: j["kind"] = "periodic"; break;
        case attractor_kind::chaotic: j["kind"] = "chaotic"; break;
        case attractor_kind::undecided: j["kind"] = "undecided"; break;
    }
    j["period"] = a.period;
    j["orbit"] = a.orbit;
    j["itinerary"] = a.itinerary;
    j["multiplier"] = a.multiplier;
    j["lyapunov"] = a.lyapunov;
    return j;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw domain_error("empty numeric list: " + csv);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptation-map toolkit for planar integrate-and-fire models with resets"};
    app.require_subcommand(1);

    // check
    auto* cmd_check = app.add_subcommand("check", "validate the standing assumptions");
    common_opts o_check;
    add_common(cmd_check, o_check);

    // map
    auto* cmd_map = app.add_subcommand("map", "emit (w, Phi(w), Phi'(w)) rows over a w grid");
    common_opts o_map;
    add_common(cmd_map, o_map);
    double map_wlo = std::numeric_limits<double>::quiet_NaN();
    double map_whi = std::numeric_limits<double>::quiet_NaN();
    int map_n = 200;
    double trace_w = std::numeric_limits<double>::quiet_NaN();
    std::string trace_out;
    cmd_map->add_option("--wmin", map_wlo, "grid start (default w** - 5d)");
    cmd_map->add_option("--wmax", map_whi, "grid end (default w* + 10d)");
    cmd_map->add_option("--n", map_n, "grid size");
    cmd_map->add_option("--trace", trace_w, "also dump the trajectory of the flight from this w");
    cmd_map->add_option("--trace-out", trace_out, "path for the trajectory dump (t, v, w)");

    // phi0
    auto* cmd_phi0 = app.add_subcommand("phi0", "singular-limit map: period and orbit");
    common_opts o_phi0;
    add_common(cmd_phi0, o_phi0);

    // orbit
    auto* cmd_orbit = app.add_subcommand("orbit", "detect the attractor from an initial w");
    common_opts o_orbit;
    add_common(cmd_orbit, o_orbit);
    double orbit_w0 = std::numeric_limits<double>::quiet_NaN();
    cmd_orbit->add_option("--w0", orbit_w0, "initial adaptation value (default w*)");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "bifurcation sweep over v_reset");
    common_opts o_sweep;
    add_common(cmd_sweep, o_sweep);
    double sw_lo = 0, sw_hi = 0, sw_step = 1e-3;
    bool sw_cold = false;
    std::string windows_out;
    cmd_sweep->add_option("--vlo", sw_lo, "sweep start")->required();
    cmd_sweep->add_option("--vhi", sw_hi, "sweep end")->required();
    cmd_sweep->add_option("--step", sw_step, "sweep step");
    cmd_sweep->add_flag("--cold", sw_cold, "cold-start rows (fixed w0 = w* per row, parallelizable)");
    cmd_sweep->add_option("--windows-out", windows_out, "path for the window table JSON");

    // hausdorff
    auto* cmd_h = app.add_subcommand("hausdorff", "distance to the singular limit per eps");
    common_opts o_h;
    add_common(cmd_h, o_h);
    std::string eps_list_str;
    bool with_c1 = false;
    cmd_h->add_option("--eps-list", eps_list_str, "comma-separated eps values (default: config eps)");
    cmd_h->add_flag("--c1", with_c1, "also report max |Phi' - Phi0'| away from w*");

    // chaos-check
    auto* cmd_chaos = app.add_subcommand("chaos-check", "shape conditions and implied chaos flags");
    common_opts o_chaos;
    add_common(cmd_chaos, o_chaos);

    // tune-misiurewicz
    auto* cmd_mis = app.add_subcommand("tune-misiurewicz",
                                       "tune v_reset so Phi^(k+1)(w*) hits the fixed point");
    common_opts o_mis;
    add_common(cmd_mis, o_mis);
    int mis_k = 4;
    std::string mis_bracket;
    cmd_mis->add_option("--k", mis_k, "orbit length parameter k")->required();
    cmd_mis->add_option("--bracket", mis_bracket, "v_reset bracket 'lo,hi'")->required();

    // acip
    auto* cmd_acip = app.add_subcommand("acip", "invariant-density histogram over the core");
    common_opts o_acip;
    add_common(cmd_acip, o_acip);
    double acip_w0 = std::numeric_limits<double>::quiet_NaN();
    long acip_n = 1000000;
    int acip_bins = 200;
    unsigned long acip_seed = 0;
    bool acip_has_seed = false;
    cmd_acip->add_option("--w0", acip_w0, "initial value (default w*)");
    cmd_acip->add_option("--n", acip_n, "post-transient iterates");
    cmd_acip->add_option("--bins", acip_bins, "histogram bins");
    cmd_acip->add_option("--seed", acip_seed, "draw w0 from the core with this seed")
        ->each([&](const std::string&) { acip_has_seed = true; });

    // certify-k
    auto* cmd_cert = app.add_subcommand("certify-k", "constructive stability certificate");
    common_opts o_cert;
    add_common(cmd_cert, o_cert);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_check) {
            run_config cfg = resolve(o_check);
            const assumption_report rep = check_assumptions(cfg.params);
            json j;
            j["schema"] = schema_tag;
            j["config_digest"] = cfg.digest;
            auto clause = [](const assumption_clause& c) {
                return json{{"pass", c.pass}, {"detail", c.detail}};
            };
            j["convexity"] = clause(rep.convexity);
            j["plateau_clause"] = clause(rep.plateau_clause);
            j["blowup_clause"] = clause(rep.blowup_clause);
            j["no_equilibrium"] = clause(rep.no_equilibrium);
            j["reset_right_of_fold"] = clause(rep.reset_right_of_fold);
            j["equilibrium_gap"] = rep.equilibrium_gap;
            j["all_pass"] = rep.all_pass();
            write_text(cfg.output.path, dump_json(j));
            return 0;
        }

        if (*cmd_map) {
            run_config cfg = resolve(o_map);
            const landmarks lm = compute_landmarks(cfg.params);
            const double span = std::max(cfg.params.d, 1.0);
            const double lo = std::isnan(map_wlo) ? lm.w_star2 - 5.0 * span : map_wlo;
            const double hi = std::isnan(map_whi) ? lm.w_star + 10.0 * span : map_whi;
            std::ostringstream os;
            os << csv_header(cfg.digest) << "w,phi,dphi\n";
            const auto grid = linspace(lo, hi, map_n);
            std::vector<map_sample> samples(grid.size());
            parallel_for(static_cast<long>(grid.size()), cfg.protocol.workers, [&](long i) {
                samples[i] = phi(cfg.params, grid[i], cfg.tol.map_tol);
            });
            for (const auto& s : samples)
                os << fmt17(s.w) << ',' << fmt17(s.phi) << ',' << fmt17(s.dphi) << '\n';
            write_text(cfg.output.path, os.str());

            if (!std::isnan(trace_w)) {
                std::vector<trajectory_point> trace;
                fly_traced(cfg.params, trace_w, cfg.tol.map_tol, trace);
                std::ostringstream ts;
                ts << csv_header(cfg.digest) << "t,v,w\n";
                for (const auto& pt : trace)
                    ts << fmt17(pt.t) << ',' << fmt17(pt.v) << ',' << fmt17(pt.w) << '\n';
                write_text(trace_out, ts.str());
            }
            return 0;
        }

        if (*cmd_phi0) {
            run_config cfg = resolve(o_phi0);
            const singular_map sm = make_singular_map(cfg.params);
            json j;
            j["schema"] = schema_tag;
            j["config_digest"] = cfg.digest;
            j["v_reset"] = cfg.params.v_reset;
            j["w_star"] = sm.w_star;
            j["p0"] = sm.p0;
            j["d"] = sm.d;
            j["period"] = phi0_period(sm);
            j["orbit"] = phi0_orbit(sm);
            write_text(cfg.output.path, dump_json(j));
            return 0;
        }

        if (*cmd_orbit) {
            run_config cfg = resolve(o_orbit);
            const landmarks lm = compute_landmarks(cfg.params);
            const double w0 = std::isnan(orbit_w0) ? lm.w_star : orbit_w0;
            detect_options opt;
            opt.transient_n = cfg.protocol.transient_n;
            opt.sample_n = std::max(cfg.protocol.sample_n, 2 * cfg.protocol.p_max);
            opt.tol = cfg.tol.orbit_tol;
            opt.p_max = cfg.protocol.p_max;
            opt.map_tol = cfg.tol.map_tol;
            json j = attractor_json(detect_attractor(cfg.params, w0, opt));
            j["schema"] = schema_tag;
            j["config_digest"] = cfg.digest;
            j["w0"] = w0;
            write_text(cfg.output.path, dump_json(j));
            return 0;
        }

        if (*cmd_sweep) {
            run_config cfg = resolve(o_sweep);
            sweep_protocol proto = cfg.protocol;
            proto.warm_start = !sw_cold;
            const auto rows = sweep_vr(cfg.params, sw_lo, sw_hi, sw_step, proto);
            std::ostringstream os;
            os << csv_header(cfg.digest) << "param,iterate_index,w\n";
            for (const auto& row : rows)
                for (size_t i = 0; i < row.samples.size(); ++i)
                    os << fmt17(row.param_value) << ',' << i << ',' << fmt17(row.samples[i])
                       << '\n';
            write_text(cfg.output.path, os.str());

            const window_table table = extract_windows(rows);
            json jt;
            jt["schema"] = schema_tag;
            jt["config_digest"] = cfg.digest;
            jt["windows"] = json::array();
            for (const auto& w : table.windows)
                jt["windows"].push_back({{"k", w.k}, {"v_lo", w.v_lo}, {"v_hi", w.v_hi}});
            jt["gaps"] = json::array();
            for (const auto& g : table.gaps)
                jt["gaps"].push_back(
                    {{"v_lo", g.v_lo}, {"v_hi", g.v_hi}, {"classification", g.classification}});
            std::string wpath = windows_out;
            if (wpath.empty() && !cfg.output.path.empty() && cfg.output.path != "-")
                wpath = cfg.output.path + ".windows.json";
            write_text(wpath, dump_json(jt));
            return 0;
        }

        if (*cmd_h) {
            run_config cfg = resolve(o_h);
            std::vector<double> eps_values =
                eps_list_str.empty() ? std::vector<double>{cfg.params.eps} : parse_list(eps_list_str);
            hausdorff_spec spec;
            spec.workers = cfg.protocol.workers;
            std::ostringstream os;
            os << csv_header(cfg.digest) << (with_c1 ? "eps,v_reset,d_h,d_c1\n" : "eps,v_reset,d_h\n");
            std::vector<eps_row> rows;
            for (double eps : eps_values) {
                model_params q = cfg.params;
                q.eps = eps;
                eps_row r;
                r.eps = eps;
                r.d_hausdorff = hausdorff_distance(q, spec);
                if (with_c1) r.c1_max = c1_discrepancy(q, 0.1, 400, spec.tol, spec.workers);
                rows.push_back(r);
                os << fmt17(eps) << ',' << fmt17(q.v_reset) << ',' << fmt17(r.d_hausdorff);
                if (with_c1) os << ',' << fmt17(r.c1_max);
                os << '\n';
            }
            if (rows.size() >= 2) os << "# loglog_slope=" << fmt17(fitted_loglog_slope(rows)) << '\n';
            write_text(cfg.output.path, os.str());
            return 0;
        }

        if (*cmd_chaos) {
            run_config cfg = resolve(o_chaos);
            chaos_report rep = chaos_conditions(cfg.params, cfg.tol.map_tol);
            if (rep.order_ok)
                if (const auto tw = turbulence_witness(cfg.params, 2))
                    rep.turbulence_witness = turbulence_pair{2, tw->first, tw->second};
            json j;
            j["schema"] = schema_tag;
            j["config_digest"] = cfg.digest;
            j["shape_ok"] = rep.shape_ok;
            j["order_ok"] = rep.order_ok;
            j["fixed_point_unstable"] = rep.fixed_point_unstable;
            j["w_star"] = rep.w_star;
            j["phi1"] = rep.phi1;
            j["phi2"] = rep.phi2;
            j["phi3"] = rep.phi3;
            j["w_fixed"] = rep.w_fixed;
            j["slope_at_fixed"] = rep.slope_at_fixed;
            j["implied"] = {{"orbits_of_all_periods", rep.implied_all_periods},
                            {"positive_topological_entropy", rep.implied_positive_entropy},
                            {"topological_chaos", rep.implied_topological_chaos}};
            if (rep.turbulence_witness) {
                const auto& tw = *rep.turbulence_witness;
                j["turbulence_witness"] = {{"m", tw.m},
                                           {"a1", {tw.a1.lo, tw.a1.hi}},
                                           {"a2", {tw.a2.lo, tw.a2.hi}}};
            } else {
                j["turbulence_witness"] = nullptr;
            }
            j["notes"] = rep.notes;
            write_text(cfg.output.path, dump_json(j));
            return 0;
        }

        if (*cmd_mis) {
            run_config cfg = resolve(o_mis);
            const auto br = parse_list(mis_bracket);
            if (br.size() != 2) throw domain_error("--bracket expects 'lo,hi'");
            const misiurewicz_result r =
                tune_misiurewicz(cfg.params, mis_k, {br[0], br[1]}, cfg.tol.map_tol);
            json j;
            j["schema"] = schema_tag;
            j["config_digest"] = cfg.digest;
            j["k"] = mis_k;
            j["v_r"] = r.v_r;
            j["residual"] = r.residual;
            j["w_fixed"] = r.w_fixed;
            j["h_evaluations"] = r.iterations;
            j["note"] = "finite-precision certificate: |Phi^(k+1)(w*) - w^f| below tolerance, "
                        "not the exact Misiurewicz property";
            write_text(cfg.output.path, dump_json(j));
            return 0;
        }

        if (*cmd_acip) {
            run_config cfg = resolve(o_acip);
            const landmarks lm = compute_landmarks(cfg.params);
            double w0 = std::isnan(acip_w0) ? lm.w_star : acip_w0;
            if (std::isnan(acip_w0) && acip_has_seed) {
                const double c1 = phi(cfg.params, lm.w_star, cfg.tol.map_tol).phi;
                const double c2 = phi(cfg.params, c1, cfg.tol.map_tol).phi;
                std::mt19937_64 rng(acip_seed);
                std::uniform_real_distribution<double> u(c2, c1);
                w0 = u(rng);
            }
            const density_estimate est =
                acip_histogram(cfg.params, w0, acip_n, acip_bins, cfg.protocol.map_tol);
            std::ostringstream os;
            os << csv_header(cfg.digest) << "bin_center,mass\n";
            const double width = (est.hi - est.lo) / est.bins;
            for (int i = 0; i < est.bins; ++i)
                os << fmt17(est.lo + (i + 0.5) * width) << ',' << fmt17(est.mass[i]) << '\n';
            write_text(cfg.output.path, os.str());
            return 0;
        }

        if (*cmd_cert) {
            run_config cfg = resolve(o_cert);
            const certify_outcome out = certify_k(cfg.params, cfg.tol.map_tol);
            json j;
            j["schema"] = schema_tag;
            j["config_digest"] = cfg.digest;
            if (std::holds_alternative<certificate>(out)) {
                const certificate& c = std::get<certificate>(out);
                j["ok"] = true;
                j["k"] = c.k;
                j["w_tilde"] = c.w_tilde;
                j["alpha"] = c.alpha;
                j["xi"] = c.xi;
                j["multiplier"] = c.multiplier;
                j["orbit"] = attractor_json(c.orbit);
            } else {
                j["ok"] = false;
                j["reason"] = std::get<certify_failure>(out).reason;
            }
            write_text(cfg.output.path, dump_json(j));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
