#include "trustgame/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "trustgame/grid.hpp"
#include "trustgame/model.hpp"
#include "trustgame/oracle.hpp"
#include "trustgame/solver.hpp"

namespace trustgame {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* to_string(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Check: return "check";
        case Command::Simulate: return "simulate";
        case Command::Sweep: return "sweep";
    }
    return "?";
}

std::vector<double> GridSpec::points() const {
    std::vector<double> pts;
    pts.reserve(count);
    if (count == 1) {
        pts.push_back(min);
        return pts;
    }
    for (int i = 0; i < count; ++i) {
        double f = static_cast<double>(i) / (count - 1);
        if (spacing == Spacing::Log) {
            pts.push_back(min * std::pow(max / min, f));
        } else {
            pts.push_back(min + (max - min) * f);
        }
    }
    return pts;
}

bool RunConfig::operator==(const RunConfig& o) const {
    return params.H == o.params.H && params.L == o.params.L && params.c == o.params.c &&
           params.lambda == o.params.lambda && params.r == o.params.r &&
           params.u == o.params.u && params.k == o.params.k && command == o.command &&
           class_filter == o.class_filter && sim.n_paths == o.sim.n_paths &&
           sim.horizon == o.sim.horizon && sim.seed == o.sim.seed &&
           sim.record_paths == o.sim.record_paths &&
           sim.truncation == o.sim.truncation && sweep_k == o.sweep_k &&
           sweep_u == o.sweep_u && output == o.output && fmt_csv == o.fmt_csv &&
           fmt_json == o.fmt_json;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParseError("unknown key \"" + it.key() + "\" in " + where);
        }
    }
}

double require_finite_number(const json& obj, const std::string& key,
                             const std::string& where) {
    if (!obj.contains(key)) {
        throw ValidationError(ValidationError::Code::BadField, key,
                              "missing key \"" + key + "\" in " + where);
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ValidationError(ValidationError::Code::BadField, key,
                              "\"" + key + "\" must be a number");
    }
    double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ValidationError(ValidationError::Code::BadField, key,
                              "\"" + key + "\" must be finite");
    }
    return d;
}

GridSpec parse_grid_spec(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"min", "max", "count", "spacing"}, where);
    GridSpec g;
    g.min = require_finite_number(obj, "min", where);
    g.max = require_finite_number(obj, "max", where);
    double count = require_finite_number(obj, "count", where);
    g.count = static_cast<int>(count);
    if (g.count < 2 || g.count != count) {
        throw ValidationError(ValidationError::Code::BadField, "count",
                              where + ".count must be an integer >= 2");
    }
    if (!(g.min > 0.0 && g.max > g.min)) {
        throw ValidationError(ValidationError::Code::BadField, "min",
                              where + " must satisfy 0 < min < max");
    }
    std::string spacing = obj.value("spacing", "linear");
    if (spacing == "log") {
        g.spacing = GridSpec::Spacing::Log;
    } else if (spacing == "linear") {
        g.spacing = GridSpec::Spacing::Linear;
    } else {
        throw ValidationError(ValidationError::Code::BadField, "spacing",
                              where + ".spacing must be \"linear\" or \"log\"");
    }
    return g;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config root must be a JSON object");
    reject_unknown_keys(
        doc, {"params", "command", "class_filter", "sim", "sweep", "output", "formats"},
        "config");

    RunConfig cfg;
    if (!doc.contains("params") || !doc.at("params").is_object()) {
        throw ValidationError(ValidationError::Code::BadField, "params",
                              "config requires a \"params\" object");
    }
    const json& pj = doc.at("params");
    reject_unknown_keys(pj, {"H", "L", "c", "lambda", "r", "u", "k"}, "params");
    cfg.params = validate_params(require_finite_number(pj, "H", "params"),
                                 require_finite_number(pj, "L", "params"),
                                 require_finite_number(pj, "c", "params"),
                                 require_finite_number(pj, "lambda", "params"),
                                 require_finite_number(pj, "r", "params"),
                                 require_finite_number(pj, "u", "params"),
                                 require_finite_number(pj, "k", "params"));

    if (!doc.contains("command") || !doc.at("command").is_string()) {
        throw ValidationError(ValidationError::Code::BadField, "command",
                              "config requires a \"command\" string");
    }
    std::string cmd = doc.at("command").get<std::string>();
    if (cmd == "solve") {
        cfg.command = Command::Solve;
    } else if (cmd == "check") {
        cfg.command = Command::Check;
    } else if (cmd == "simulate") {
        cfg.command = Command::Simulate;
    } else if (cmd == "sweep") {
        cfg.command = Command::Sweep;
    } else {
        throw ValidationError(ValidationError::Code::BadField, "command",
                              "unknown command \"" + cmd + "\"");
    }

    if (doc.contains("class_filter")) {
        if (!doc.at("class_filter").is_string()) {
            throw ValidationError(ValidationError::Code::BadField, "class_filter",
                                  "class_filter must be a string");
        }
        auto cls = eq_class_from_string(doc.at("class_filter").get<std::string>());
        if (!cls) {
            throw ValidationError(ValidationError::Code::BadField, "class_filter",
                                  "unknown class_filter");
        }
        cfg.class_filter = cls;
    }

    cfg.sim.n_paths = 10000;
    cfg.sim.horizon = 20.0 / cfg.params.r;
    cfg.sim.seed = 0;
    cfg.sim.record_paths = false;
    cfg.sim.truncation = TruncationPolicy::AnalyticTail;
    if (doc.contains("sim")) {
        const json& sj = doc.at("sim");
        if (!sj.is_object()) {
            throw ValidationError(ValidationError::Code::BadField, "sim",
                                  "sim must be an object");
        }
        reject_unknown_keys(
            sj, {"n_paths", "horizon", "seed", "record_paths", "truncation_policy"},
            "sim");
        if (sj.contains("n_paths")) {
            double n = require_finite_number(sj, "n_paths", "sim");
            if (n < 1 || n != std::floor(n)) {
                throw ValidationError(ValidationError::Code::BadField, "n_paths",
                                      "sim.n_paths must be a positive integer");
            }
            cfg.sim.n_paths = static_cast<long>(n);
        }
        if (sj.contains("horizon")) {
            double h = require_finite_number(sj, "horizon", "sim");
            if (!(h > 0.0)) {
                throw ValidationError(ValidationError::Code::BadField, "horizon",
                                      "sim.horizon must be > 0");
            }
            cfg.sim.horizon = h;
        }
        if (sj.contains("seed")) {
            const json& sv = sj.at("seed");
            if (!sv.is_number_unsigned() && !sv.is_number_integer()) {
                throw ValidationError(ValidationError::Code::BadField, "seed",
                                      "sim.seed must be a non-negative integer");
            }
            cfg.sim.seed = sv.get<std::uint64_t>();
        }
        if (sj.contains("record_paths")) {
            if (!sj.at("record_paths").is_boolean()) {
                throw ValidationError(ValidationError::Code::BadField, "record_paths",
                                      "sim.record_paths must be a boolean");
            }
            cfg.sim.record_paths = sj.at("record_paths").get<bool>();
        }
        if (sj.contains("truncation_policy")) {
            std::string tp = sj.at("truncation_policy").get<std::string>();
            if (tp == "analytic_tail") {
                cfg.sim.truncation = TruncationPolicy::AnalyticTail;
            } else if (tp == "hard_cut") {
                cfg.sim.truncation = TruncationPolicy::HardCut;
            } else {
                throw ValidationError(ValidationError::Code::BadField,
                                      "truncation_policy",
                                      "sim.truncation_policy must be analytic_tail or "
                                      "hard_cut");
            }
        }
    }

    if (doc.contains("sweep")) {
        const json& wj = doc.at("sweep");
        if (!wj.is_object()) {
            throw ValidationError(ValidationError::Code::BadField, "sweep",
                                  "sweep must be an object");
        }
        reject_unknown_keys(wj, {"k", "u"}, "sweep");
        if (wj.contains("k")) cfg.sweep_k = parse_grid_spec(wj.at("k"), "sweep.k");
        if (wj.contains("u")) cfg.sweep_u = parse_grid_spec(wj.at("u"), "sweep.u");
    }

    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) {
            throw ValidationError(ValidationError::Code::BadField, "output",
                                  "output must be a string");
        }
        cfg.output = doc.at("output").get<std::string>();
    }

    if (doc.contains("formats")) {
        const json& fj = doc.at("formats");
        if (!fj.is_array() || fj.empty()) {
            throw ValidationError(ValidationError::Code::BadField, "formats",
                                  "formats must be a non-empty array");
        }
        cfg.fmt_csv = false;
        cfg.fmt_json = false;
        for (const json& f : fj) {
            std::string s = f.get<std::string>();
            if (s == "csv") {
                cfg.fmt_csv = true;
            } else if (s == "json") {
                cfg.fmt_json = true;
            } else {
                throw ValidationError(ValidationError::Code::BadField, "formats",
                                      "formats entries must be \"csv\" or \"json\"");
            }
        }
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string emit_resolved_config(const RunConfig& cfg) {
    json doc;
    doc["params"] = {{"H", cfg.params.H},     {"L", cfg.params.L},
                     {"c", cfg.params.c},     {"lambda", cfg.params.lambda},
                     {"r", cfg.params.r},     {"u", cfg.params.u},
                     {"k", cfg.params.k}};
    doc["command"] = to_string(cfg.command);
    if (cfg.class_filter) doc["class_filter"] = to_string(*cfg.class_filter);
    doc["sim"] = {
        {"n_paths", cfg.sim.n_paths},
        {"horizon", cfg.sim.horizon},
        {"seed", cfg.sim.seed},
        {"record_paths", cfg.sim.record_paths},
        {"truncation_policy",
         cfg.sim.truncation == TruncationPolicy::AnalyticTail ? "analytic_tail"
                                                              : "hard_cut"}};
    if (cfg.sweep_k || cfg.sweep_u) {
        json sweep;
        auto emit_grid = [](const GridSpec& g) {
            return json{{"min", g.min},
                        {"max", g.max},
                        {"count", g.count},
                        {"spacing",
                         g.spacing == GridSpec::Spacing::Log ? "log" : "linear"}};
        };
        if (cfg.sweep_k) sweep["k"] = emit_grid(*cfg.sweep_k);
        if (cfg.sweep_u) sweep["u"] = emit_grid(*cfg.sweep_u);
        doc["sweep"] = sweep;
    }
    doc["output"] = cfg.output;
    json formats = json::array();
    if (cfg.fmt_csv) formats.push_back("csv");
    if (cfg.fmt_json) formats.push_back("json");
    doc["formats"] = formats;
    return doc.dump(2) + "\n";
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

fs::path prepare_output_dir(const RunConfig& cfg) {
    fs::path dir(cfg.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    write_file(dir / "resolved_config.json", emit_resolved_config(cfg));
    json manifest = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"command", to_string(cfg.command)},
                     {"seed", cfg.sim.seed}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return dir;
}

json solution_to_json(const EquilibriumSolution& s) {
    json doc;
    doc["class"] = to_string(s.cls);
    json cut;
    auto put = [&](const char* name, const std::optional<double>& v) {
        if (v) cut[name] = *v;
    };
    put("x_low", s.cutoffs.x_low);
    put("x_zero", s.cutoffs.x_zero);
    put("x_star", s.cutoffs.x_star);
    put("x_bar", s.cutoffs.x_bar);
    doc["cutoffs"] = cut;
    if (s.sigma_star) doc["sigma_star"] = *s.sigma_star;
    doc["boundary_values"] = {{"V0", s.bv.V0},
                              {"V1", s.bv.V1},
                              {"U11", s.bv.U11},
                              {"U00", s.bv.U00}};
    json diag;
    for (const auto& [key, val] : s.diagnostics) diag[key] = val;
    doc["diagnostics"] = diag;
    return doc;
}

void write_values_csv(const fs::path& path, const EquilibriumSolution& s) {
    std::string out = "p,V,eta,sigma,alpha\n";
    const int n = 2001;
    for (int i = 0; i < n; ++i) {
        double p = static_cast<double>(i) / (n - 1);
        PolicyAt at = eval_solution(s, p);
        double sigma = at.inspection.kind == InspectionAction::Kind::Immediate
                           ? std::numeric_limits<double>::infinity()
                       : at.inspection.kind == InspectionAction::Kind::Hazard
                           ? at.inspection.rate
                           : 0.0;
        out += fmt17(p) + "," + fmt17(at.V) + "," + fmt17(at.eta) + "," +
               fmt17(sigma) + "," + std::to_string(at.alpha) + "\n";
    }
    write_file(path, out);
}

std::vector<EqClass> classes_to_attempt(const RunConfig& cfg) {
    if (cfg.class_filter) return {*cfg.class_filter};
    return {EqClass::Periodic, EqClass::Breakdown, EqClass::Recovery,
            EqClass::Disclosure};
}

std::vector<std::pair<EqClass, EquilibriumSolution>> solve_all(const RunConfig& cfg) {
    std::vector<std::pair<EqClass, EquilibriumSolution>> out;
    for (EqClass cls : classes_to_attempt(cfg)) {
        auto sol = solve_class(cls, cfg.params);
        if (sol && sol->cls == cls) out.emplace_back(cls, *sol);
    }
    return out;
}

}  // namespace

int run_solve(const RunConfig& cfg) {
    fs::path dir = prepare_output_dir(cfg);
    auto solved = solve_all(cfg);
    bool any_inspection_class = false;
    for (auto& [cls, sol] : solved) {
        if (cls != EqClass::NoInspection) any_inspection_class = true;
        std::string name = to_string(cls);
        if (cfg.fmt_json) {
            write_file(dir / ("solution_" + name + ".json"),
                       solution_to_json(sol).dump(2) + "\n");
        }
        if (cfg.fmt_csv) write_values_csv(dir / ("values_" + name + ".csv"), sol);
    }
    // the never-inspect valuation is always available
    if (!cfg.class_filter || *cfg.class_filter == EqClass::NoInspection) {
        auto none = solve_class(EqClass::NoInspection, cfg.params);
        if (none) {
            if (cfg.fmt_json) {
                write_file(dir / "solution_no_inspection.json",
                           solution_to_json(*none).dump(2) + "\n");
            }
            if (cfg.fmt_csv) write_values_csv(dir / "values_no_inspection.csv", *none);
        }
    }
    return any_inspection_class ? 0 : 2;
}

namespace {

struct OracleCheck {
    std::size_t n_nodes;
    double dt;
    double sup_err_V;
    double sup_err_U;
    double agent_gap;
    double principal_gap;
    double flagged_agent_gap_immediate;
    double bound;
};

OracleCheck oracle_check_level(const EquilibriumSolution& sol, const ModelParams& m,
                               std::size_t n_nodes, double dt) {
    GridModel g = build_grid(m, n_nodes, dt, solution_exact_nodes(sol));
    GridProfile prof = profile_from_solution(sol, g);
    GridValues vals = policy_evaluate(g, prof, m);
    OracleCheck oc{};
    oc.n_nodes = n_nodes;
    oc.dt = dt;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double p = g.p[i];
        oc.sup_err_V = std::max(oc.sup_err_V, std::fabs(vals.V[i] - sol.value(p)));
        oc.sup_err_U =
            std::max(oc.sup_err_U, std::fabs(vals.U0[i] - sol.agent_value(p, 0)));
        oc.sup_err_U =
            std::max(oc.sup_err_U, std::fabs(vals.U1[i] - sol.agent_value(p, 1)));
    }
    DeviationGaps gaps = deviation_gap(g, prof, vals, m);
    oc.agent_gap = gaps.agent_gap;
    oc.principal_gap = gaps.principal_gap;
    oc.flagged_agent_gap_immediate = gaps.flagged_agent_gap_immediate;
    double dp = 1.0 / static_cast<double>(n_nodes - 1);
    oc.bound = 10.0 * (dt + dp) * std::max({m.H, m.L, m.u});
    return oc;
}

json oracle_check_to_json(const OracleCheck& oc) {
    return json{{"n_nodes", oc.n_nodes},
                {"dt", oc.dt},
                {"sup_err_V", oc.sup_err_V},
                {"sup_err_U", oc.sup_err_U},
                {"agent_gap", oc.agent_gap},
                {"principal_gap", oc.principal_gap},
                {"flagged_agent_gap_immediate", oc.flagged_agent_gap_immediate},
                {"gap_bound", oc.bound}};
}

}  // namespace

int run_check(const RunConfig& cfg) {
    fs::path dir = prepare_output_dir(cfg);
    auto solved = solve_all(cfg);
    if (solved.empty()) return 2;
    const ModelParams& m = cfg.params;
    json report;
    report["params_ok"] = true;
    bool all_pass = true;
    json classes = json::object();
    for (auto& [cls, sol_orig] : solved) {
        EquilibriumSolution sol = sol_orig;
        if (cfg.debug_sigma_scale != 1.0 && sol.sigma_star) {
            sol.sigma_star = *sol.sigma_star * cfg.debug_sigma_scale;
        }
        json cj;
        OracleCheck coarse = oracle_check_level(sol, m, 2001, 1e-3);
        OracleCheck fine = oracle_check_level(sol, m, 4001, 5e-4);
        cj["oracle_coarse"] = oracle_check_to_json(coarse);
        cj["oracle_fine"] = oracle_check_to_json(fine);
        double err_c = std::max(coarse.sup_err_V, coarse.sup_err_U);
        double err_f = std::max(fine.sup_err_V, fine.sup_err_U);
        bool oracle_ok = err_c < 5e-3 && err_f > 0.0 && err_c / err_f >= 1.5;
        bool gaps_ok = coarse.agent_gap <= coarse.bound &&
                       coarse.principal_gap <= coarse.bound &&
                       fine.agent_gap <= fine.bound &&
                       fine.principal_gap <= fine.bound;
        cj["oracle_ok"] = oracle_ok;
        cj["gaps_ok"] = gaps_ok;

        bool indiff_ok = true;
        if (sol.sigma_star) {
            double s = *sol.sigma_star;
            double cl = m.c / m.lambda;
            double resid = (m.r + m.lambda) * cl + s * cl - s * (sol.bv.U11 - sol.bv.U00);
            double h = sigma_fixed_point_h(
                s, *sol.cutoffs.x_bar,
                cls == EqClass::Recovery ? sol.cutoffs.x_low : std::nullopt,
                cls == EqClass::Breakdown   ? MixRegime::Breakdown
                : cls == EqClass::Recovery  ? MixRegime::Recovery
                                            : MixRegime::Disclosure,
                m);
            cj["indifference_residual"] = resid;
            cj["sigma_h_residual"] = h;
            indiff_ok = std::fabs(resid) < 1e-9 && std::fabs(h) < 1e-10;
        }
        cj["indifference_ok"] = indiff_ok;

        ValueEstimates est = estimate_values(sol, m, cfg.sim);
        auto within = [](const Estimate& e, double target) {
            return std::fabs(e.mean - target) <= 3.0 * e.se;
        };
        bool mc_ok = within(est.V1, sol.bv.V1) && within(est.V0, sol.bv.V0) &&
                     within(est.U11, sol.bv.U11) && within(est.U00, sol.bv.U00);
        cj["monte_carlo"] = {
            {"n_paths", est.n_paths},
            {"V1", {{"mean", est.V1.mean}, {"se", est.V1.se}, {"target", sol.bv.V1}}},
            {"V0", {{"mean", est.V0.mean}, {"se", est.V0.se}, {"target", sol.bv.V0}}},
            {"U11",
             {{"mean", est.U11.mean}, {"se", est.U11.se}, {"target", sol.bv.U11}}},
            {"U00",
             {{"mean", est.U00.mean}, {"se", est.U00.se}, {"target", sol.bv.U00}}}};
        cj["monte_carlo_ok"] = mc_ok;

        bool pass = oracle_ok && gaps_ok && indiff_ok && mc_ok;
        cj["pass"] = pass;
        all_pass = all_pass && pass;
        classes[to_string(cls)] = cj;
    }
    report["classes"] = classes;
    report["all_pass"] = all_pass;
    write_file(dir / "check_report.json", report.dump(2) + "\n");
    return all_pass ? 0 : 3;
}

int run_simulate(const RunConfig& cfg) {
    fs::path dir = prepare_output_dir(cfg);
    if (!cfg.class_filter) {
        throw ValidationError(ValidationError::Code::BadField, "class_filter",
                              "simulate requires class_filter");
    }
    auto sol = solve_class(*cfg.class_filter, cfg.params);
    if (!sol) return 2;
    const ModelParams& m = cfg.params;

    std::vector<PathRecord> records;
    double sa = 0.0, sa2 = 0.0, sp = 0.0, sp2 = 0.0;
    std::string paths_csv = "path_id,t,event,p_before,p_after,theta\n";
    for (long i = 0; i < cfg.sim.n_paths; ++i) {
        PathRecord rec =
            simulate_path(*sol, m, cfg.sim, static_cast<std::uint64_t>(i), 1.0, 1);
        sa += rec.agent_payoff;
        sa2 += rec.agent_payoff * rec.agent_payoff;
        sp += rec.principal_payoff;
        sp2 += rec.principal_payoff * rec.principal_payoff;
        if (cfg.sim.record_paths) {
            for (const PathEvent& ev : rec.events) {
                paths_csv += std::to_string(i) + "," + fmt17(ev.t) + "," +
                             to_string(ev.kind) + "," + fmt17(ev.p_before) + "," +
                             fmt17(ev.p_after) + "," + std::to_string(ev.theta) + "\n";
            }
        }
        records.push_back(std::move(rec));
    }
    double sb = 0.0, sb2 = 0.0, sq = 0.0, sq2 = 0.0;
    for (long i = 0; i < cfg.sim.n_paths; ++i) {
        PathRecord rec = simulate_path(
            *sol, m, cfg.sim,
            static_cast<std::uint64_t>(cfg.sim.n_paths + i), 0.0, 0);
        sb += rec.agent_payoff;
        sb2 += rec.agent_payoff * rec.agent_payoff;
        sq += rec.principal_payoff;
        sq2 += rec.principal_payoff * rec.principal_payoff;
    }
    double n = static_cast<double>(cfg.sim.n_paths);
    auto stat = [&](double s, double s2) {
        Estimate e;
        e.mean = s / n;
        e.se = std::sqrt(std::max(0.0, s2 / n - e.mean * e.mean) / n);
        return e;
    };
    Estimate u11 = stat(sa, sa2), v1 = stat(sp, sp2);
    Estimate u00 = stat(sb, sb2), v0 = stat(sq, sq2);

    if (cfg.sim.record_paths && cfg.fmt_csv) {
        write_file(dir / "paths.csv", paths_csv);
    }

    CycleStatistics cs = cycle_statistics(records);
    auto within = [](const Estimate& e, double target) {
        return std::fabs(e.mean - target) <= 3.0 * e.se;
    };
    json est = {
        {"class", to_string(sol->cls)},
        {"n_paths", cfg.sim.n_paths},
        {"seed", cfg.sim.seed},
        {"V1", {{"mean", v1.mean}, {"se", v1.se}, {"target", sol->bv.V1},
                {"within_3se", within(v1, sol->bv.V1)}}},
        {"V0", {{"mean", v0.mean}, {"se", v0.se}, {"target", sol->bv.V0},
                {"within_3se", within(v0, sol->bv.V0)}}},
        {"U11", {{"mean", u11.mean}, {"se", u11.se}, {"target", sol->bv.U11},
                 {"within_3se", within(u11, sol->bv.U11)}}},
        {"U00", {{"mean", u00.mean}, {"se", u00.se}, {"target", sol->bv.U00},
                 {"within_3se", within(u00, sol->bv.U00)}}},
        {"cycle_statistics",
         {{"n_inspections", cs.n_inspections},
          {"mean_inter_inspection_time", cs.mean_inter_inspection_time},
          {"fraction_inspections_passed", cs.fraction_inspections_passed},
          {"mean_time_blind_trust", cs.mean_time_blind_trust},
          {"mean_time_inspection_region", cs.mean_time_inspection_region},
          {"mean_time_blind_distrust", cs.mean_time_blind_distrust},
          {"breakdown_frequency", cs.breakdown_frequency},
          {"mean_recovery_cycle", cs.mean_recovery_cycle},
          {"n_reports", cs.n_reports},
          {"report_rate_at_zero", cs.report_rate_at_zero}}}};
    write_file(dir / "estimates.json", est.dump(2) + "\n");
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    fs::path dir = prepare_output_dir(cfg);
    if (!cfg.sweep_k || !cfg.sweep_u) {
        throw ValidationError(ValidationError::Code::BadField, "sweep",
                              "sweep requires sweep.k and sweep.u grids");
    }
    std::vector<double> ks = cfg.sweep_k->points();
    std::vector<double> us = cfg.sweep_u->points();
    auto cells = existence_map(cfg.params, ks, us);

    std::string csv =
        "k,u,periodic,breakdown,recovery,disclosure,u_bar_P,u_low_B,u_low_R_r,"
        "u_low_R_rl\n";
    auto opt17 = [](const std::optional<double>& v) {
        return v ? fmt17(*v) : std::string();
    };
    for (const ExistenceCell& cell : cells) {
        csv += fmt17(cell.k) + "," + fmt17(cell.u) + "," +
               std::to_string(cell.periodic ? 1 : 0) + "," +
               std::to_string(cell.breakdown ? 1 : 0) + "," +
               std::to_string(cell.recovery ? 1 : 0) + "," +
               std::to_string(cell.disclosure ? 1 : 0) + "," +
               opt17(cell.th.u_bar_P) + "," + opt17(cell.th.u_low_B) + "," +
               opt17(cell.th.u_low_R_r) + "," + opt17(cell.th.u_low_R_rl) + "\n";
    }
    write_file(dir / "existence_map.csv", csv);

    // breakdown-existence flips as k decreases at fixed u
    auto flag_at = [&](std::size_t ki, std::size_t ui) {
        return cells[ki * us.size() + ui].breakdown;
    };
    std::string witness_csv = "k,k_prime,u\n";
    long n_witness = 0;
    for (std::size_t ui = 0; ui < us.size(); ++ui) {
        for (std::size_t ki = 1; ki < ks.size(); ++ki) {
            if (flag_at(ki, ui) && !flag_at(ki - 1, ui)) {
                witness_csv += fmt17(ks[ki]) + "," + fmt17(ks[ki - 1]) + "," +
                               fmt17(us[ui]) + "\n";
                n_witness += 1;
            }
        }
    }
    write_file(dir / "corollary1_witnesses.csv", witness_csv);

    json summary = {{"n_cells", cells.size()},
                    {"n_corollary1_witnesses", n_witness},
                    {"note", n_witness == 0 ? "no witness on this grid" : "witnesses found"}};
    write_file(dir / "sweep_summary.json", summary.dump(2) + "\n");
    return 0;
}

int run_command(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Solve: return run_solve(cfg);
        case Command::Check: return run_check(cfg);
        case Command::Simulate: return run_simulate(cfg);
        case Command::Sweep: return run_sweep(cfg);
    }
    return 1;
}

}  // namespace trustgame
