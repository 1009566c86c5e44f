#include "leafspace/runner.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "leafspace/bundle.hpp"
#include "leafspace/completion.hpp"
#include "leafspace/error.hpp"
#include "leafspace/scenario_io.hpp"

namespace leafspace {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    if (!c.check.empty()) j["check"] = c.check;
    if (!c.example_name.empty()) j["example"] = c.example_name;
    if (c.scenario_file) j["scenario_file"] = *c.scenario_file;
    j["n"] = c.n;
    j["group"] = c.group;
    if (c.at) j["at"] = vec_json(*c.at);
    j["path_delta"] = c.path_delta;
    j["budget_K"] = c.budget_K;
    j["window_B"] = c.window_B;
    j["grid_size"] = c.grid_size;
    j["sample_count"] = c.sample_count;
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    return j;
}

std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct Budgets {
    int K;
    double B;
    int grid;
    int samples;
    double tol;
};

Budgets resolve_budgets(const RunConfig& cfg, const Scenario& sc) {
    Budgets b;
    b.K = cfg.budget_K > 0 ? cfg.budget_K : sc.default_K;
    b.B = cfg.window_B > 0 ? cfg.window_B : sc.default_B;
    b.grid = cfg.grid_size > 0 ? cfg.grid_size : sc.default_grid;
    b.samples = cfg.sample_count > 0 ? cfg.sample_count : sc.default_samples;
    b.tol = cfg.tol;
    return b;
}

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    out << text;
}

std::string trajectory_csv(const GroupPath& path, const std::vector<std::pair<double, Vec>>& samples) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& [t, y] : samples) {
        os << t;
        Vec g = path.value(t);
        for (int i = 0; i < g.size(); ++i) os << "," << g[i];
        for (int i = 0; i < y.size(); ++i) os << "," << y[i];
        os << "\n";
    }
    return os.str();
}

json verdict(bool pass, double tolerance, const json& budget, json extra = json::object()) {
    json v = std::move(extra);
    v["pass"] = pass;
    v["tolerance"] = tolerance;
    v["budget"] = budget;
    return v;
}

// ---------------------------------------------------------------------------

class Runner {
public:
    Runner(const RunConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

    RunResult execute() {
        RunResult out;
        report_["command"] = cfg_.command + (cfg_.check.empty() ? "" : ":" + cfg_.check);
        report_["config"] = config_json(cfg_);
        report_["verdicts"] = json::object();
        report_["residuals"] = json::object();
        report_["witnesses"] = json::object();
        report_["errors"] = json::array();

        try {
            scenario_ = resolve_scenario();
        } catch (const Error& e) {
            report_["errors"].push_back(e.what());
            report_["timestamp"] = timestamp_now();
            out.exit_code = 2;
            out.report = report_;
            return out;
        }
        budgets_ = resolve_budgets(cfg_, *scenario_);
        report_["budgets"] = {{"K", budgets_.K},
                              {"B", budgets_.B},
                              {"grid", budgets_.grid},
                              {"samples", budgets_.samples}};
        report_["scenario"] = scenario_summary(*scenario_);

        int code = 0;
        try {
            if (cfg_.command == "lift") {
                run_lift();
            } else if (cfg_.command == "recurrence") {
                run_recurrence();
            } else if (cfg_.command == "atlas") {
                run_atlas();
            } else if (cfg_.command == "check") {
                run_check(cfg_.check);
            } else if (cfg_.command == "example") {
                bool ran = false;
                if (cfg_.want_lift) run_lift(), ran = true;
                if (cfg_.want_recurrence) run_recurrence(), ran = true;
                if (cfg_.want_atlas) run_atlas(), ran = true;
                if (cfg_.want_limit_elements) run_limit_elements(), ran = true;
                if (!cfg_.check.empty()) run_check(cfg_.check), ran = true;
                if (!ran) run_oracles();
            } else {
                fail(ErrorCode::invalid_config, "unknown command '" + cfg_.command + "'");
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::invalid_config || e.code() == ErrorCode::invalid_parameter ||
                e.code() == ErrorCode::unknown_scenario)
                code = 2;
            else
                code = 1;
            report_["errors"].push_back(e.what());
        }

        if (code == 0)
            for (const auto& [name, v] : report_["verdicts"].items())
                if (v.contains("pass") && !v["pass"].get<bool>()) code = 1;

        report_["timestamp"] = timestamp_now();
        if (cfg_.out_dir) {
            write_text(*cfg_.out_dir, "report.json", report_.dump(2) + "\n");
            for (const auto& [name, text] : artifacts_) write_text(*cfg_.out_dir, name, text);
        }
        out.exit_code = code;
        out.report = report_;
        return out;
    }

private:
    Scenario resolve_scenario() {
        if (cfg_.scenario_file) return load_scenario(*cfg_.scenario_file);
        std::string name = cfg_.example_name.empty() ? "wedge" : cfg_.example_name;
        return make_scenario(name, cfg_.n, parse_group_kind(cfg_.group));
    }

    Vec base_point() {
        if (cfg_.at) {
            if (!scenario_->algebra.domain().contains(*cfg_.at))
                fail(ErrorCode::invalid_config, "--at point is outside the domain");
            return *cfg_.at;
        }
        return scenario_->random_point(rng_);
    }

    void run_lift() {
        Vec x0 = base_point();
        const int k = scenario_->group.dim();
        GroupPath path = GroupPath::linear(Vec::zero(k), cfg_.path_delta * Vec::unit(k, 0));
        IntegrateOptions opts;
        opts.record_samples = true;
        LiftResult r = lift_path(scenario_->algebra, path, x0, opts);
        json entry;
        entry["liftable"] = r.liftable;
        if (r.liftable) {
            entry["group_end"] = vec_json(r.group_end);
            entry["point_end"] = vec_json(r.point_end);
        } else {
            entry["escape_s"] = r.escape_s;
            entry["escape_group"] = vec_json(r.escape_group);
            entry["escape_point"] = vec_json(r.escape_point);
        }
        entry["min_boundary_distance"] = r.min_boundary_distance;
        report_["residuals"]["lift"] = entry;
        report_["verdicts"]["lift_completed"] =
            verdict(true, kPointTol, {{"K", budgets_.K}}, {{"samples", r.samples.size()}});
        artifacts_["trajectories.csv"] = trajectory_csv(path, r.samples);
        artifacts_["leaf_0.csv"] = artifacts_["trajectories.csv"];

        LeafRange lr = leaf_range(scenario_->algebra, scenario_->group, x0, budgets_.B);
        json range;
        range["complete"] = lr.complete;
        if (scenario_->group.dim() == 1) {
            range["t_plus"] = lr.t_plus();
            range["t_minus"] = lr.t_minus();
        }
        report_["residuals"]["leaf_range"] = range;
    }

    void run_recurrence() {
        Vec x0 = base_point();
        IntersectionSet rec = recurrence_set(scenario_->algebra, scenario_->group, x0, budgets_.K);
        json members = json::array();
        int leaf_id = 0;
        for (const auto& m : rec.members) {
            members.push_back({{"point", vec_json(m.point)},
                               {"deck", vec_json(m.deck)},
                               {"escape", false},
                               {"merged_tie", m.merged_tie}});
            IntegrateOptions opts;
            opts.record_samples = true;
            GroupPath path = GroupPath::linear(Vec::zero(scenario_->group.dim()), m.deck);
            LiftResult r = lift_path(scenario_->algebra, path, x0, opts);
            if (r.liftable) {
                std::ostringstream name;
                name << "leaf_" << leaf_id++ << ".csv";
                artifacts_[name.str()] = trajectory_csv(path, r.samples);
            }
        }
        report_["residuals"]["recurrence"] = {{"target", vec_json(rec.target_g)},
                                              {"source", vec_json(rec.source_g)},
                                              {"K", rec.budget_K},
                                              {"members", members}};
        report_["verdicts"]["recurrence_completed"] =
            verdict(true, kPointTol, {{"K", budgets_.K}}, {{"count", rec.members.size()}});

        if (scenario_->oracles.recurrence) {
            OracleResidual res = oracle_compare_recurrence(*scenario_, x0, budgets_.K);
            report_["residuals"]["recurrence_vs_oracle"] = res.residual;
            report_["verdicts"]["recurrence_oracle"] =
                verdict(res.residual <= 1e-6, 1e-6, {{"K", budgets_.K}});
        }
    }

    std::vector<Vec> atlas_grid() {
        std::vector<Vec> grid;
        const int k = scenario_->group.dim();
        if (scenario_->group.compact()) {
            for (int i = 0; i < budgets_.grid; ++i) {
                Vec g = Vec::zero(k);
                for (int c = 0; c < k; ++c)
                    g += (static_cast<double>(i) / budgets_.grid) * scenario_->group.lattice()[static_cast<size_t>(c)];
                grid.push_back(g);
            }
        } else {
            for (int i = 0; i < budgets_.grid; ++i) {
                double u = budgets_.B * (static_cast<double>(i) / budgets_.grid - 0.5);
                grid.push_back(u * Vec::unit(k, 0));
            }
        }
        return grid;
    }

    void run_atlas() {
        std::vector<Vec> samples;
        for (int i = 0; i < budgets_.samples; ++i) samples.push_back(scenario_->random_point(rng_));
        CompletionAtlas atlas = build_atlas(scenario_->algebra, scenario_->group, atlas_grid(),
                                            samples, budgets_.K);
        json aj;
        aj["grid"] = json::array();
        for (const auto& g : atlas.grid) aj["grid"].push_back(vec_json(g));
        aj["samples"] = json::array();
        for (const auto& s : atlas.samples) aj["samples"].push_back(vec_json(s));
        aj["classes"] = atlas.class_id;
        aj["isotropy"] = atlas.isotropy;
        aj["class_count"] = atlas.class_count;
        json trs = json::array();
        for (const auto& tr : atlas.transitions) {
            int defined = 0;
            for (uint8_t d : tr.defined) defined += d;
            trs.push_back({{"from", tr.from},
                           {"to", tr.to},
                           {"defined_samples", defined},
                           {"translation_residual", tr.translation_residual}});
        }
        aj["transitions"] = trs;
        aj["flags"] = {{"chart_complete", atlas.chart_complete}, {"orbifold_like", atlas.orbifold_like}};
        report_["residuals"]["atlas"] = aj;
        double tol = budgets_.tol > 0 ? budgets_.tol : kPointTol;
        double worst_translation = 0.0;
        for (const auto& tr : atlas.transitions)
            worst_translation = std::max(worst_translation, tr.translation_residual);
        report_["verdicts"]["atlas_consistency"] = verdict(
            atlas.triangle_residual <= tol && worst_translation <= tol && atlas.fiber_residual <= tol,
            tol, {{"K", budgets_.K}, {"grid", budgets_.grid}},
            {{"triangle_residual", atlas.triangle_residual},
             {"translation_residual", worst_translation},
             {"fiber_residual", atlas.fiber_residual}});
    }

    void run_limit_elements() {
        std::vector<Vec> boundary;
        for (const Vec& l : scenario_->interesting_loci) boundary.push_back(l);
        for (int i = 0; i < 10; ++i) boundary.push_back(scenario_->random_point(rng_));
        auto reports = limit_elements(scenario_->algebra, scenario_->group, boundary, budgets_.K,
                                      budgets_.B);
        json lj = json::array();
        for (const auto& r : reports) {
            json e;
            e["g_hat"] = vec_json(r.g_hat);
            e["x_hat"] = vec_json(r.x_hat);
            e["empty_at_budget"] = r.empty_at_budget;
            e["witness_count"] = r.witness_x.size();
            json wx = json::array(), wy = json::array();
            for (size_t i = 0; i < std::min<size_t>(r.witness_x.size(), 4); ++i) {
                wx.push_back(vec_json(r.witness_x[i]));
                wy.push_back(vec_json(r.witness_y[i]));
            }
            e["witness_x"] = wx;
            e["witness_y"] = wy;
            lj.push_back(e);
        }
        report_["witnesses"]["limit_elements"] = lj;
        report_["verdicts"]["limit_elements_completed"] =
            verdict(true, kPointTol, {{"K", budgets_.K}, {"B", budgets_.B}},
                    {{"count", reports.size()}});
    }

    void run_check(const std::string& what) {
        if (what == "hausdorff")
            check_hausdorff();
        else if (what == "proper")
            check_proper();
        else if (what == "orbifold")
            check_orbifold();
        else if (what == "killing")
            check_killing();
        else if (what == "slice")
            check_slice();
        else if (what == "bundle")
            check_bundle();
        else
            fail(ErrorCode::invalid_config, "unknown check '" + what + "'");
    }

    void check_hausdorff() {
        std::vector<Vec> loci = scenario_->interesting_loci;
        for (int i = 0; i < 20; ++i) loci.push_back(scenario_->random_point(rng_));
        auto families =
            generate_families(scenario_->algebra, scenario_->group, loci, budgets_.K, rng_);
        HausdorffReport rep =
            hausdorff_check(scenario_->algebra, scenario_->group, families, budgets_.K);
        json extra;
        extra["families_checked"] = rep.families_checked;
        extra["families_passed"] = rep.families_passed;
        report_["verdicts"]["hausdorff"] =
            verdict(rep.hausdorff, rep.match_tol, {{"K", budgets_.K}}, extra);
        if (rep.counterexample) {
            const auto& fam = *rep.counterexample;
            json w;
            w["origin"] = fam.origin;
            w["deck"] = vec_json(fam.deck);
            w["x_limit"] = vec_json(fam.x_limit);
            w["y_limit"] = vec_json(fam.y_limit);
            json xs = json::array(), ys = json::array();
            for (size_t i = 0; i < std::min<size_t>(fam.x_seq.size(), 5); ++i) {
                xs.push_back(vec_json(fam.x_seq[i]));
                ys.push_back(vec_json(fam.y_seq[i]));
            }
            w["x_seq_head"] = xs;
            w["y_seq_head"] = ys;
            report_["witnesses"]["hausdorff_counterexample"] = w;
        }
        if (rep.non_separable) {
            const auto& p = *rep.non_separable;
            report_["witnesses"]["non_separable_pair"] = {
                {"chart_e_point", vec_json(p.chart_e_point)},
                {"g_hat", vec_json(p.g_hat)},
                {"chart_g_point", vec_json(p.chart_g_point)},
                {"common_neighbors", p.neighbor_x.size()}};
        }
    }

    void check_proper() {
        std::vector<Vec> loci;
        Vec center = Vec::zero(scenario_->algebra.domain().dimension());
        if (scenario_->algebra.domain().contains(center)) loci.push_back(center);
        for (const Vec& l : scenario_->interesting_loci) loci.push_back(l);
        for (int i = 0; i < 10; ++i) loci.push_back(scenario_->random_point(rng_));
        auto families = generate_proper_families(scenario_->algebra, scenario_->group, loci, 0,
                                                 budgets_.B, rng_);
        ProperReport rep = proper_check(scenario_->algebra, scenario_->group, families, budgets_.B,
                                        budgets_.K);
        json extra;
        extra["families_valid"] = rep.families_valid;
        extra["families_skipped"] = rep.families_skipped;
        report_["verdicts"]["proper"] =
            verdict(rep.proper, rep.cluster_tol, {{"B", budgets_.B}, {"K", budgets_.K}}, extra);
        if (rep.counterexample) {
            json w;
            w["origin"] = rep.counterexample->origin;
            json gs = json::array();
            for (const auto& g : rep.counterexample->g_seq) gs.push_back(vec_json(g));
            w["g_seq"] = gs;
            w["x_limit"] = vec_json(rep.counterexample->x_seq.back());
            report_["witnesses"]["proper_counterexample"] = w;
        }

        if (scenario_->group.dim() == 1) {
            Vec probe = scenario_->algebra.domain().contains(center) ? center
                                                                     : scenario_->random_point(rng_);
            IsotropyCompactnessReport iso = isotropy_compactness(
                scenario_->algebra, scenario_->group, probe, budgets_.B, budgets_.K);
            report_["residuals"]["isotropy_compactness"] = {
                {"at", vec_json(probe)},
                {"whole_window", iso.whole_window},
                {"compact_proxy", iso.compact_proxy},
                {"cluster_count", iso.cluster_count},
                {"elements", iso.elements},
                {"note", iso.note}};
        }
    }

    void check_orbifold() {
        std::vector<Vec> samples;
        for (int i = 0; i < budgets_.samples; ++i) samples.push_back(scenario_->random_point(rng_));
        bool all_ok = true;
        json iso = json::array();
        for (const Vec& x : samples) {
            double r = uniform_ball_radius(scenario_->algebra, scenario_->group, x, budgets_.K, 0.05);
            UniformityReport u =
                uniformity_check(scenario_->algebra, scenario_->group, x, r, budgets_.K);
            iso.push_back(u.isotropy_order);
            if (!u.uniform || !u.properly_discontinuous) all_ok = false;
        }
        json extra;
        extra["isotropy_orders"] = iso;
        Vec center = Vec::zero(scenario_->algebra.domain().dimension());
        if (scenario_->algebra.domain().contains(center)) {
            UniformityReport u0 =
                uniformity_check(scenario_->algebra, scenario_->group, center, 0.05, budgets_.K);
            extra["isotropy_at_center"] = u0.isotropy_order;
            if (!u0.uniform || !u0.properly_discontinuous) all_ok = false;
        }
        report_["verdicts"]["orbifold_like"] =
            verdict(all_ok, kPointTol, {{"K", budgets_.K}, {"samples", budgets_.samples}}, extra);
    }

    void check_killing() {
        const int d = scenario_->algebra.domain().dimension();
        std::vector<Vec> samples;
        for (int i = 0; i < 20; ++i) samples.push_back(scenario_->random_point(rng_, 0.1));
        double defect = killing_defect(scenario_->algebra, flat_metric(d), samples, 1e-4);
        double tol = budgets_.tol > 0 ? budgets_.tol : 1e-5;
        report_["residuals"]["killing_defect_flat"] = defect;
        report_["verdicts"]["killing"] =
            verdict(defect <= tol, tol, {{"samples", 20}}, {{"defect", defect}});

        if (scenario_->group.compact()) {
            // Averaging needs a complete orbit; incomplete ones are flagged
            // per the proper-case hypothesis, not failed.
            bool averaged = false;
            for (int attempt = 0; attempt < 10 && !averaged; ++attempt) {
                Vec x = scenario_->random_point(rng_, 0.3);
                try {
                    Mat avg =
                        average_metric(scenario_->algebra, scenario_->group, flat_metric(d), x, 256);
                    double dev = (avg - Mat::identity(d)).max_abs();
                    report_["residuals"]["averaging_fixed_point_dev"] = dev;
                    report_["verdicts"]["averaging"] =
                        verdict(dev <= 1e-6, 1e-6, {{"quadrature", 256}}, {{"at", vec_json(x)}});
                    averaged = true;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::orbit_escapes_domain) throw;
                }
            }
            if (!averaged)
                report_["residuals"]["averaging_skipped"] =
                    "no complete orbit found for averaging (orbit-escapes-domain)";
        }
    }

    void check_slice() {
        Vec x = cfg_.at ? *cfg_.at : scenario_->random_point(rng_, 0.2);
        double radius = 0.25 * std::min(1.0, scenario_->algebra.domain().signed_distance(x));
        SliceReport rep = build_slice(scenario_->algebra, x, radius, 16);
        json extra;
        extra["at"] = vec_json(x);
        extra["degenerate"] = rep.degenerate;
        extra["spanning_min_sv"] = rep.spanning_min_sv;
        extra["direct_sum_overlap"] = rep.direct_sum_overlap;
        extra["tangency_kernel_margin"] = rep.tangency_kernel_margin;
        extra["tube_coverage"] = rep.tube_coverage;
        report_["verdicts"]["slice"] = verdict(rep.degenerate ? true : rep.conditions_pass, 1e-6,
                                               {{"radius", radius}}, extra);

        Vec center = Vec::zero(scenario_->algebra.domain().dimension());
        if (scenario_->algebra.domain().contains(center)) {
            SliceReport c = build_slice(scenario_->algebra, center, 0.05, 8);
            report_["residuals"]["slice_center_degenerate"] = c.degenerate;
        }
    }

    void check_bundle() {
        LinearLift lift = tangent_lift(scenario_->algebra);
        std::vector<Vec> samples;
        for (int i = 0; i < 10; ++i) samples.push_back(scenario_->random_point(rng_, 0.1));
        const int r = lift.rank;
        std::vector<Vec> fiber_probes = {Vec::zero(r), Vec::unit(r, 0), 2.0 * Vec::unit(r, 0)};
        if (r > 1) fiber_probes.push_back(Vec::unit(r, 1));
        ProjectabilityReport proj = projectability_check(bundle_field_of(lift), scenario_->algebra,
                                                         samples, fiber_probes, 1e-9);
        report_["residuals"]["bundle_projection_residual"] = proj.projection_residual;

        // Superposition of fiber transport along a short liftable path.
        double sup_res = 0.0;
        const int k = scenario_->group.dim();
        GroupPath path = GroupPath::linear(Vec::zero(k), 0.3 * Vec::unit(k, 0));
        int tested = 0;
        for (int i = 0; i < 5 && tested < 3; ++i) {
            Vec x0 = scenario_->random_point(rng_, 0.1);
            Vec u = rng_.uniform_vec(r, -1.0, 1.0), w = rng_.uniform_vec(r, -1.0, 1.0);
            double a = rng_.uniform(-2.0, 2.0), b = rng_.uniform(-2.0, 2.0);
            BundleLiftResult lu = lift_path_on_bundle(lift, path, x0, u);
            BundleLiftResult lw = lift_path_on_bundle(lift, path, x0, w);
            BundleLiftResult lc = lift_path_on_bundle(lift, path, x0, a * u + b * w);
            if (!lu.liftable || !lw.liftable || !lc.liftable) continue;
            ++tested;
            sup_res = std::max(sup_res,
                               (lc.fiber_end - (a * lu.fiber_end + b * lw.fiber_end)).norm());
        }
        report_["residuals"]["bundle_superposition_residual"] = sup_res;
        report_["verdicts"]["bundle"] = verdict(
            proj.projectable && sup_res <= 1e-6, 1e-6, {{"samples", samples.size()}},
            {{"projection_residual", proj.projection_residual}, {"superposition", sup_res}});
    }

    void run_oracles() {
        Vec x0 = cfg_.at ? *cfg_.at : scenario_->random_point(rng_, 0.1);
        json budget = {{"K", budgets_.K}, {"B", budgets_.B}};
        if (scenario_->oracles.trajectory && scenario_->oracles.escape_interval) {
            auto [lo, hi] = scenario_->oracles.escape_interval(x0);
            double span_lo = std::max(lo + 1e-3, -2.0), span_hi = std::min(hi - 1e-3, 2.0);
            OracleResidual tr = oracle_compare_trajectory(*scenario_, x0, span_lo, span_hi, 64);
            report_["residuals"]["trajectory_vs_oracle"] = tr.residual;
            report_["verdicts"]["trajectory_oracle"] = verdict(tr.residual <= 1e-6, 1e-6, budget);

            OracleResidual esc = oracle_compare_escape(*scenario_, x0);
            report_["residuals"]["escape_vs_oracle"] = esc.residual;
            report_["verdicts"]["escape_oracle"] = verdict(esc.residual <= 1e-3, 1e-3, budget);
        }
        if (scenario_->oracles.recurrence) {
            OracleResidual rec = oracle_compare_recurrence(*scenario_, x0, budgets_.K);
            report_["residuals"]["recurrence_vs_oracle"] = rec.residual;
            report_["verdicts"]["recurrence_oracle"] = verdict(rec.residual <= 1e-6, 1e-6, budget);
        }
        // Cartan-Maurer flatness of the algebra/group pairing at the probe.
        double h = 1e-3;
        if (scenario_->algebra.domain().signed_distance(x0) > 2.0 * h) {
            FlatnessReport fr = flatness_defect(scenario_->algebra, scenario_->group, x0, h);
            report_["residuals"]["flatness_defect"] = fr.total();
            report_["residuals"]["flatness_nonabelian_flag"] = fr.flagged_nonabelian;
        }
        report_["residuals"]["at"] = vec_json(x0);
    }

    const RunConfig& cfg_;
    CounterRng rng_;
    std::optional<Scenario> scenario_;
    Budgets budgets_{};
    json report_;
    std::map<std::string, std::string> artifacts_;
};

}  // namespace

RunResult run(const RunConfig& config) { return Runner(config).execute(); }

json stable_report(json report) {
    report.erase("timestamp");
    return report;
}

}  // namespace leafspace
