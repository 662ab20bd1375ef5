#include "nphase/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace nphase {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config error at '" + path + "': " + msg);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            fail(path + "." + item.key(), "unknown key");
}

double get_number(const json& obj, const std::string& path) {
    if (!obj.is_number()) fail(path, "expected a number");
    return obj.get<double>();
}

int get_int(const json& obj, const std::string& path) {
    if (!obj.is_number_integer()) fail(path, "expected an integer");
    return obj.get<int>();
}

}  // namespace

double parse_frequency_string(const std::string& text, const std::string& path) {
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && text[pos] == ' ') ++pos; };
    skip_ws();

    double sign = 1.0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') sign = -1.0;
        ++pos;
    }
    skip_ws();

    bool two_pi = false;
    if (text.compare(pos, 4, "2pi*") == 0) {
        two_pi = true;
        pos += 4;
    }
    skip_ws();

    std::size_t used = 0;
    double value;
    try {
        value = std::stod(text.substr(pos), &used);
    } catch (const std::exception&) {
        fail(path, "cannot parse number in frequency '" + text + "'");
    }
    pos += used;
    skip_ws();

    const std::string unit = text.substr(pos);
    double scale;
    bool angular = false;
    if (unit.empty() || unit == "Hz") {
        scale = 1.0;
    } else if (unit == "kHz") {
        scale = 1e3;
    } else if (unit == "MHz") {
        scale = 1e6;
    } else if (unit == "GHz") {
        scale = 1e9;
    } else if (unit == "rad/s") {
        scale = 1.0;
        angular = true;
    } else {
        fail(path, "unknown frequency unit '" + unit + "'");
    }
    if (angular && two_pi)
        fail(path, "'2pi*' prefix cannot combine with rad/s");

    const double magnitude = sign * value * scale;
    return angular ? magnitude : 2.0 * M_PI * magnitude;
}

double parse_frequency(const json& value, const std::string& path) {
    if (value.is_number()) return 2.0 * M_PI * value.get<double>();
    if (value.is_string()) return parse_frequency_string(value.get<std::string>(), path);
    fail(path, "expected a frequency (number in Hz or string)");
}

std::string frequency_to_string(double rad_per_s) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17grad/s", rad_per_s);
    return buf;
}

std::vector<double> GridSpec::values() const {
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i)
        xs[i] = from + (to - from) * static_cast<double>(i) / (count - 1);
    return xs;
}

namespace {

PhysicalParams parse_params(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"n", "nu", "omega_pump", "delta_pa", "delta_pc", "kappa", "omega_z",
                "g0", "wavelength_nm", "k_pump", "mass_kg"});
    PhysicalParams p;
    if (!obj.contains("n")) fail(path + ".n", "required");
    p.n = get_int(obj.at("n"), path + ".n");
    if (obj.contains("nu")) p.nu = get_int(obj.at("nu"), path + ".nu");
    auto freq = [&](const char* key, double& dst, bool required) {
        if (obj.contains(key))
            dst = parse_frequency(obj.at(key), path + "." + key);
        else if (required)
            fail(path + "." + key, "required");
    };
    freq("omega_pump", p.omega_pump, true);
    freq("delta_pa", p.delta_pa, true);
    freq("delta_pc", p.delta_pc, true);
    freq("kappa", p.kappa, true);
    freq("omega_z", p.omega_z, true);
    freq("g0", p.g0, true);
    if (obj.contains("wavelength_nm") && obj.contains("k_pump"))
        fail(path, "give either wavelength_nm or k_pump, not both");
    if (obj.contains("wavelength_nm"))
        p.k_pump = 2.0 * M_PI / (get_number(obj.at("wavelength_nm"), path) * 1e-9);
    if (obj.contains("k_pump")) p.k_pump = get_number(obj.at("k_pump"), path);
    if (obj.contains("mass_kg")) p.mass = get_number(obj.at("mass_kg"), path);
    try {
        p.validate();
    } catch (const std::invalid_argument& err) {
        fail(path, err.what());
    }
    return p;
}

IntegratorControls parse_integrator(const json& obj, const std::string& path,
                                    const PhysicalParams& p, double& t_end_s,
                                    bool& has_seconds) {
    check_keys(obj, path,
               {"rel_tol", "abs_tol", "t_end_s", "t_end_tau", "max_step",
                "sample_every_tau", "samples"});
    IntegratorControls ctl;
    if (obj.contains("rel_tol")) ctl.rel_tol = get_number(obj.at("rel_tol"), path);
    if (obj.contains("abs_tol")) ctl.abs_tol = get_number(obj.at("abs_tol"), path);
    if (obj.contains("max_step")) ctl.max_step = get_number(obj.at("max_step"), path);
    const bool has_s = obj.contains("t_end_s");
    const bool has_tau = obj.contains("t_end_tau");
    if (has_s == has_tau)
        fail(path, "give exactly one of t_end_s or t_end_tau");
    if (has_s) {
        t_end_s = get_number(obj.at("t_end_s"), path + ".t_end_s");
        ctl.t_end = t_end_s * p.omega_z;
        has_seconds = true;
    } else {
        ctl.t_end = get_number(obj.at("t_end_tau"), path + ".t_end_tau");
        has_seconds = false;
    }
    if (obj.contains("sample_every_tau") && obj.contains("samples"))
        fail(path, "give either sample_every_tau or samples");
    if (obj.contains("sample_every_tau"))
        ctl.sample_every = get_number(obj.at("sample_every_tau"), path);
    else if (obj.contains("samples"))
        ctl.sample_every = ctl.t_end / get_int(obj.at("samples"), path);
    else
        ctl.sample_every = ctl.t_end / 1000;
    try {
        ctl.validate();
    } catch (const std::invalid_argument& err) {
        fail(path, err.what());
    }
    return ctl;
}

EnsembleSpec parse_ensemble(const json& obj, const std::string& path,
                            std::uint64_t seed) {
    check_keys(obj, path, {"count", "position_scale", "momentum_scale"});
    EnsembleSpec spec;
    spec.seed = seed;
    if (obj.contains("count")) spec.count = get_int(obj.at("count"), path);
    if (obj.contains("position_scale"))
        spec.position_scale = get_number(obj.at("position_scale"), path);
    if (obj.contains("momentum_scale"))
        spec.momentum_scale = get_number(obj.at("momentum_scale"), path);
    try {
        spec.validate();
    } catch (const std::invalid_argument& err) {
        fail(path, err.what());
    }
    return spec;
}

SearchRegion parse_search(const json& obj, const std::string& path, int n) {
    check_keys(obj, path,
               {"lo", "hi", "grid_per_dim", "dedup_radius", "symmetric_subspace"});
    SearchRegion region;
    double lo = -1.6, hi = 1.6;
    if (obj.contains("lo")) lo = get_number(obj.at("lo"), path + ".lo");
    if (obj.contains("hi")) hi = get_number(obj.at("hi"), path + ".hi");
    if (obj.contains("grid_per_dim"))
        region.grid_per_dim = get_int(obj.at("grid_per_dim"), path);
    if (obj.contains("dedup_radius"))
        region.dedup_radius = get_number(obj.at("dedup_radius"), path);
    if (obj.contains("symmetric_subspace"))
        region.symmetric_subspace = obj.at("symmetric_subspace").get<bool>();
    const int dim = region.symmetric_subspace ? 2 : n;
    region.lo = Eigen::VectorXd::Constant(dim, lo);
    region.hi = Eigen::VectorXd::Constant(dim, hi);
    try {
        region.validate(n);
    } catch (const std::invalid_argument& err) {
        fail(path, err.what());
    }
    return region;
}

GridSpec parse_grid_axis(const json& obj, const std::string& path) {
    check_keys(obj, path, {"from", "to", "count"});
    GridSpec g;
    if (!obj.contains("from") || !obj.contains("to"))
        fail(path, "needs from and to");
    g.from = parse_frequency(obj.at("from"), path + ".from");
    g.to = parse_frequency(obj.at("to"), path + ".to");
    if (obj.contains("count")) g.count = get_int(obj.at("count"), path + ".count");
    if (g.count < 2) fail(path + ".count", "must be >= 2");
    return g;
}

}  // namespace

RunConfig RunConfig::from_json(const json& doc) {
    check_keys(doc, "$",
               {"params", "seed", "output_dir", "formats", "threads", "integrator",
                "ensemble", "search", "grid", "linecuts", "linecut_omega", "contours",
                "lyapunov", "cluster_radius_frac", "varphi"});
    RunConfig cfg;
    if (!doc.contains("params")) fail("$.params", "required");
    cfg.params = parse_params(doc.at("params"), "$.params");

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
            fail("$.seed", "expected an integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("output_dir"))
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("threads")) cfg.threads = get_int(doc.at("threads"), "$.threads");
    if (cfg.threads < 1) fail("$.threads", "must be >= 1");

    if (doc.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : doc.at("formats")) {
            const std::string name = f.get<std::string>();
            if (name != "csv" && name != "json" && name != "svg")
                fail("$.formats", "unknown format '" + name + "'");
            cfg.formats.push_back(name);
        }
    }

    if (doc.contains("integrator")) {
        double t_end_s = 0.0;
        bool has_seconds = false;
        cfg.integrator = parse_integrator(doc.at("integrator"), "$.integrator",
                                          cfg.params, t_end_s, has_seconds);
        if (has_seconds) cfg.t_end_seconds = t_end_s;
    }
    if (doc.contains("ensemble"))
        cfg.ensemble = parse_ensemble(doc.at("ensemble"), "$.ensemble", cfg.seed);
    if (doc.contains("search"))
        cfg.search = parse_search(doc.at("search"), "$.search", cfg.params.n);

    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        check_keys(g, "$.grid", {"omega_pump", "delta_pc"});
        if (g.contains("omega_pump"))
            cfg.grid_omega = parse_grid_axis(g.at("omega_pump"), "$.grid.omega_pump");
        if (g.contains("delta_pc"))
            cfg.grid_delta_pc = parse_grid_axis(g.at("delta_pc"), "$.grid.delta_pc");
    }
    if (doc.contains("linecuts"))
        for (std::size_t i = 0; i < doc.at("linecuts").size(); ++i)
            cfg.linecuts.push_back(parse_frequency(
                doc.at("linecuts")[i], "$.linecuts[" + std::to_string(i) + "]"));
    if (doc.contains("linecut_omega"))
        cfg.linecut_omega = parse_grid_axis(doc.at("linecut_omega"), "$.linecut_omega");

    if (doc.contains("contours")) {
        std::size_t idx = 0;
        for (const auto& c : doc.at("contours")) {
            const std::string path = "$.contours[" + std::to_string(idx++) + "]";
            check_keys(c, path, {"omega_pump", "delta_pc", "lo", "hi", "samples"});
            ContourSpec spec;
            if (!c.contains("omega_pump") || !c.contains("delta_pc"))
                fail(path, "needs omega_pump and delta_pc");
            spec.omega_pump = parse_frequency(c.at("omega_pump"), path);
            spec.delta_pc = parse_frequency(c.at("delta_pc"), path);
            if (c.contains("lo")) spec.lo = get_number(c.at("lo"), path);
            if (c.contains("hi")) spec.hi = get_number(c.at("hi"), path);
            if (c.contains("samples")) spec.samples = get_int(c.at("samples"), path);
            cfg.contours.push_back(spec);
        }
    }

    if (doc.contains("lyapunov")) {
        const auto& l = doc.at("lyapunov");
        check_keys(l, "$.lyapunov", {"lo", "hi", "grid_per_dim", "max_norm"});
        if (l.contains("lo")) cfg.lyapunov.lo = get_number(l.at("lo"), "$.lyapunov.lo");
        if (l.contains("hi")) cfg.lyapunov.hi = get_number(l.at("hi"), "$.lyapunov.hi");
        if (l.contains("grid_per_dim"))
            cfg.lyapunov.grid_per_dim = get_int(l.at("grid_per_dim"), "$.lyapunov");
        if (l.contains("max_norm"))
            cfg.lyapunov.max_norm = get_number(l.at("max_norm"), "$.lyapunov");
    }

    if (doc.contains("cluster_radius_frac"))
        cfg.cluster_radius_frac =
            get_number(doc.at("cluster_radius_frac"), "$.cluster_radius_frac");
    if (doc.contains("varphi")) cfg.varphi = get_number(doc.at("varphi"), "$.varphi");
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& err) {
        throw ConfigError("config parse failure in '" + path + "': " + err.what());
    }
    return from_json(doc);
}

json RunConfig::to_json() const {
    json doc;
    json ps;
    ps["n"] = params.n;
    ps["nu"] = params.nu;
    ps["omega_pump"] = frequency_to_string(params.omega_pump);
    ps["delta_pa"] = frequency_to_string(params.delta_pa);
    ps["delta_pc"] = frequency_to_string(params.delta_pc);
    ps["kappa"] = frequency_to_string(params.kappa);
    ps["omega_z"] = frequency_to_string(params.omega_z);
    ps["g0"] = frequency_to_string(params.g0);
    ps["k_pump"] = params.k_pump;
    ps["mass_kg"] = params.mass;
    doc["params"] = ps;
    doc["seed"] = seed;
    if (!output_dir.empty()) doc["output_dir"] = output_dir;
    doc["formats"] = formats;
    doc["threads"] = threads;

    if (integrator) {
        json ic;
        ic["rel_tol"] = integrator->rel_tol;
        ic["abs_tol"] = integrator->abs_tol;
        if (t_end_seconds)
            ic["t_end_s"] = *t_end_seconds;
        else
            ic["t_end_tau"] = integrator->t_end;
        ic["max_step"] = integrator->max_step;
        ic["sample_every_tau"] = integrator->sample_every;
        doc["integrator"] = ic;
    }
    if (ensemble) {
        json es;
        es["count"] = ensemble->count;
        es["position_scale"] = ensemble->position_scale;
        es["momentum_scale"] = ensemble->momentum_scale;
        doc["ensemble"] = es;
    }
    if (search) {
        json ss;
        ss["lo"] = search->lo[0];
        ss["hi"] = search->hi[0];
        ss["grid_per_dim"] = search->grid_per_dim;
        ss["dedup_radius"] = search->dedup_radius;
        ss["symmetric_subspace"] = search->symmetric_subspace;
        doc["search"] = ss;
    }
    auto axis = [](const GridSpec& g) {
        json a;
        a["from"] = frequency_to_string(g.from);
        a["to"] = frequency_to_string(g.to);
        a["count"] = g.count;
        return a;
    };
    if (grid_omega || grid_delta_pc) {
        json g;
        if (grid_omega) g["omega_pump"] = axis(*grid_omega);
        if (grid_delta_pc) g["delta_pc"] = axis(*grid_delta_pc);
        doc["grid"] = g;
    }
    if (!linecuts.empty()) {
        json ls = json::array();
        for (double d : linecuts) ls.push_back(frequency_to_string(d));
        doc["linecuts"] = ls;
    }
    if (linecut_omega) doc["linecut_omega"] = axis(*linecut_omega);
    if (!contours.empty()) {
        json cs = json::array();
        for (const auto& c : contours) {
            json cc;
            cc["omega_pump"] = frequency_to_string(c.omega_pump);
            cc["delta_pc"] = frequency_to_string(c.delta_pc);
            cc["lo"] = c.lo;
            cc["hi"] = c.hi;
            cc["samples"] = c.samples;
            cs.push_back(cc);
        }
        doc["contours"] = cs;
    }
    {
        json l;
        l["lo"] = lyapunov.lo;
        l["hi"] = lyapunov.hi;
        l["grid_per_dim"] = lyapunov.grid_per_dim;
        l["max_norm"] = lyapunov.max_norm;
        doc["lyapunov"] = l;
    }
    doc["cluster_radius_frac"] = cluster_radius_frac;
    if (varphi) doc["varphi"] = *varphi;
    return doc;
}

}  // namespace nphase
