#include "chkp/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chkp {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument("config: unknown key \"" + where + "." + it.key() + "\"");
    }
}

template <class T>
void get_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void get_opt(const json& obj, const char* key, std::optional<double>& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<double>();
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config: root must be an object");
    reject_unknown(doc, {"version", "grid", "model", "stepper", "initial", "analysis"}, "$");

    RunConfig cfg;
    get_if(doc, "version", cfg.version);
    if (cfg.version != 1) throw std::invalid_argument("config: unsupported version");

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown(g, {"nx", "ny", "lx", "ly"}, "$.grid");
        get_if(g, "nx", cfg.nx);
        get_if(g, "ny", cfg.ny);
        get_if(g, "lx", cfg.lx);
        get_if(g, "ly", cfg.ly);
    }
    if (doc.contains("model")) {
        const json& m = doc.at("model");
        reject_unknown(m, {"preset", "coeffs", "gamma", "kappa"}, "$.model");
        get_if(m, "preset", cfg.model_preset);
        get_if(m, "coeffs", cfg.poly_coeffs);
        get_if(m, "gamma", cfg.gamma);
        get_if(m, "kappa", cfg.kappa);
    }
    if (doc.contains("stepper")) {
        const json& s = doc.at("stepper");
        reject_unknown(s,
                       {"dt0", "t_end", "cfl", "grad_stop", "dt_floor", "c_g",
                        "snapshot_every", "diag_every", "xs_order"},
                       "$.stepper");
        get_if(s, "dt0", cfg.stepper.dt0);
        get_if(s, "t_end", cfg.stepper.t_end);
        get_if(s, "cfl", cfg.stepper.cfl);
        get_if(s, "grad_stop", cfg.stepper.grad_stop);
        get_if(s, "dt_floor", cfg.stepper.dt_floor);
        get_if(s, "c_g", cfg.stepper.c_g);
        get_if(s, "snapshot_every", cfg.stepper.snapshot_every);
        get_if(s, "diag_every", cfg.stepper.diag_every);
        get_if(s, "xs_order", cfg.stepper.xs_order);
    }
    if (doc.contains("initial")) {
        const json& i = doc.at("initial");
        reject_unknown(i, {"preset", "amplitude", "target_m0", "sigma", "b", "steepness", "eps"},
                       "$.initial");
        get_if(i, "preset", cfg.initial.preset);
        get_if(i, "amplitude", cfg.initial.amplitude);
        get_opt(i, "target_m0", cfg.initial.target_m0);
        get_if(i, "sigma", cfg.initial.sigma);
        get_if(i, "b", cfg.initial.b);
        get_if(i, "steepness", cfg.initial.steepness);
        get_if(i, "eps", cfg.initial.eps);
    }
    if (doc.contains("analysis")) {
        const json& a = doc.at("analysis");
        reject_unknown(a,
                       {"xs_order", "char_x0", "char_y0", "weight_sigma", "c_user",
                        "liouville_tol", "k_window_factor", "umin", "umax", "n_samples"},
                       "$.analysis");
        get_if(a, "xs_order", cfg.analysis.xs_order);
        get_opt(a, "char_x0", cfg.analysis.char_x0);
        get_opt(a, "char_y0", cfg.analysis.char_y0);
        get_if(a, "weight_sigma", cfg.analysis.weight_sigma);
        get_if(a, "c_user", cfg.analysis.c_user);
        get_if(a, "liouville_tol", cfg.analysis.liouville_tol);
        get_if(a, "k_window_factor", cfg.analysis.k_window_factor);
        get_if(a, "umin", cfg.analysis.umin);
        get_if(a, "umax", cfg.analysis.umax);
        get_if(a, "n_samples", cfg.analysis.n_samples);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string canonical_config_json(const RunConfig& cfg) {
    json doc;
    doc["version"] = cfg.version;
    doc["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}, {"lx", cfg.lx}, {"ly", cfg.ly}};
    json model = {{"preset", cfg.model_preset}, {"gamma", cfg.gamma}, {"kappa", cfg.kappa}};
    if (!cfg.poly_coeffs.empty()) model["coeffs"] = cfg.poly_coeffs;
    doc["model"] = model;
    doc["stepper"] = {{"dt0", cfg.stepper.dt0},
                      {"t_end", cfg.stepper.t_end},
                      {"cfl", cfg.stepper.cfl},
                      {"grad_stop", cfg.stepper.grad_stop},
                      {"dt_floor", cfg.stepper.dt_floor},
                      {"c_g", cfg.stepper.c_g},
                      {"snapshot_every", cfg.stepper.snapshot_every},
                      {"diag_every", cfg.stepper.diag_every},
                      {"xs_order", cfg.stepper.xs_order}};
    json init = {{"preset", cfg.initial.preset},
                 {"amplitude", cfg.initial.amplitude},
                 {"sigma", cfg.initial.sigma},
                 {"b", cfg.initial.b},
                 {"steepness", cfg.initial.steepness},
                 {"eps", cfg.initial.eps}};
    if (cfg.initial.target_m0) init["target_m0"] = *cfg.initial.target_m0;
    doc["initial"] = init;
    json ana = {{"xs_order", cfg.analysis.xs_order},
                {"weight_sigma", cfg.analysis.weight_sigma},
                {"c_user", cfg.analysis.c_user},
                {"liouville_tol", cfg.analysis.liouville_tol},
                {"k_window_factor", cfg.analysis.k_window_factor},
                {"umin", cfg.analysis.umin},
                {"umax", cfg.analysis.umax},
                {"n_samples", cfg.analysis.n_samples}};
    if (cfg.analysis.char_x0) ana["char_x0"] = *cfg.analysis.char_x0;
    if (cfg.analysis.char_y0) ana["char_y0"] = *cfg.analysis.char_y0;
    doc["analysis"] = ana;
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) {
    // FNV-1a over the canonical serialization.
    std::string s = canonical_config_json(cfg);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ModelParams build_model(const RunConfig& cfg) {
    ModelParams p;
    p.gamma = cfg.gamma;
    if (cfg.model_preset == "polynomial")
        p.g = make_polynomial(cfg.poly_coeffs);
    else
        p.g = nonlinearity_by_name(cfg.model_preset, cfg.kappa);
    validate_nonlinearity(p.g);
    if (!(p.gamma > 0.0)) throw std::invalid_argument("config: gamma must be positive");
    return p;
}

SpectralField initial_data(std::shared_ptr<const Grid> grid, const InitialDataSpec& spec) {
    const Grid& g = *grid;
    const double xc = 0.5 * g.lx(), yc = 0.5 * g.ly();
    const double kx1 = two_pi / g.lx(), ky1 = two_pi / g.ly();

    auto finish = [](SpectralField f) { return project_xmean(dealias(std::move(f))); };

    if (spec.preset == "smooth_small") {
        return finish(SpectralField::from_function(grid, [&](double x, double y) {
            return spec.amplitude * std::sin(kx1 * x) * std::cos(ky1 * y);
        }));
    }
    if (spec.preset == "localized_bump") {
        const double s2 = spec.sigma * spec.sigma;
        return finish(SpectralField::from_function(grid, [&](double x, double y) {
            double xt = x - xc, yt = y - yc;
            return spec.amplitude * std::exp(-(xt * xt + spec.b * yt * yt) / s2);
        }));
    }
    if (spec.preset == "y_modulated") {
        return finish(SpectralField::from_function(grid, [&](double x, double y) {
            return spec.amplitude * std::sin(kx1 * x) * (1.0 + spec.eps * std::cos(ky1 * y));
        }));
    }
    if (spec.preset == "steep_front") {
        const double s2 = spec.sigma * spec.sigma;
        const double k = spec.steepness;
        SpectralField unit = finish(SpectralField::from_function(grid, [&](double x, double y) {
            double xt = x - xc, yt = y - yc;
            return -std::sin(k * xt) * std::exp(-(xt * xt + spec.b * yt * yt) / s2);
        }));
        double a = spec.amplitude;
        if (spec.target_m0) {
            // The profile is linear in the amplitude, so the grid min of u_x
            // scales exactly; solve for the amplitude directly.
            if (*spec.target_m0 >= 0.0)
                throw std::invalid_argument("initial_data: target_m0 must be negative");
            double unit_min = min_value(ddx(unit));
            if (unit_min >= 0.0) throw std::invalid_argument("initial_data: degenerate front profile");
            a = *spec.target_m0 / unit_min;
        }
        SpectralField out(grid);
        auto& v = out.values_mut();
        const auto& uv = unit.values();
        for (std::size_t i = 0; i < uv.size(); ++i) v[i] = a * uv[i];
        return out;
    }
    throw std::invalid_argument("initial_data: unknown preset " + spec.preset);
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& diags) {
    std::ostringstream out;
    out << "t,dt,conserved,energy_E,xs_norm,grad_inf,min_ux,I\n";
    for (const auto& d : diags) {
        out << fmt17(d.t) << ',' << fmt17(d.dt) << ',' << fmt17(d.conserved) << ','
            << fmt17(d.energy_e) << ',' << fmt17(d.xs_norm) << ',' << fmt17(d.grad_inf) << ','
            << fmt17(d.min_ux) << ',' << fmt17(d.blowup_i) << '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << out.str();
}

std::vector<DiagnosticRecord> read_diagnostics_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty diagnostics file: " + path);
    if (line != "t,dt,conserved,energy_E,xs_norm,grad_inf,min_ux,I")
        throw std::runtime_error("unexpected diagnostics header in " + path);
    std::vector<DiagnosticRecord> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        DiagnosticRecord d;
        double* cols[8] = {&d.t, &d.dt, &d.conserved, &d.energy_e,
                           &d.xs_norm, &d.grad_inf, &d.min_ux, &d.blowup_i};
        const char* p = line.c_str();
        for (int i = 0; i < 8; ++i) {
            char* end = nullptr;
            *cols[i] = std::strtod(p, &end);
            if (end == p) throw std::runtime_error("malformed diagnostics row in " + path);
            p = end;
            if (i < 7) {
                if (*p != ',') throw std::runtime_error("malformed diagnostics row in " + path);
                ++p;
            }
        }
        d.finite = std::isfinite(d.conserved) && std::isfinite(d.grad_inf);
        out.push_back(d);
    }
    return out;
}

namespace {

std::string snap_base(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06d", index);
    return buf;
}

} // namespace

void save_snapshot(const std::string& dir, int index, double t, const SpectralField& u) {
    fs::create_directories(dir);
    const Grid& g = u.grid();
    std::string base = dir + "/" + snap_base(index);
    {
        std::ofstream raw(base + ".f64", std::ios::binary | std::ios::trunc);
        if (!raw) throw std::runtime_error("cannot write " + base + ".f64");
        raw.write(reinterpret_cast<const char*>(u.values().data()),
                  static_cast<std::streamsize>(u.values().size() * sizeof(double)));
    }
    json side = {{"nx", g.nx()},       {"ny", g.ny()},
                 {"lx", g.lx()},       {"ly", g.ly()},
                 {"t", t},             {"dtype", "<f8"},
                 {"layout", "row-major,y-outer"}};
    std::ofstream sj(base + ".json", std::ios::binary | std::ios::trunc);
    if (!sj) throw std::runtime_error("cannot write " + base + ".json");
    sj << side.dump(2) << "\n";
}

Trajectory load_trajectory(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("snapshot directory missing: " + dir);
    std::vector<std::string> bases;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && name.size() > 5 &&
            name.substr(name.size() - 5) == ".json")
            bases.push_back(name.substr(0, name.size() - 5));
    }
    std::sort(bases.begin(), bases.end());
    if (bases.empty()) throw std::runtime_error("no snapshots in " + dir);

    Trajectory traj;
    std::shared_ptr<const Grid> grid;
    for (const auto& b : bases) {
        std::ifstream sj(dir + "/" + b + ".json");
        if (!sj) throw std::runtime_error("cannot open sidecar for " + b);
        json side = json::parse(sj);
        int nx = side.at("nx"), ny = side.at("ny");
        double lx = side.at("lx"), ly = side.at("ly");
        double t = side.at("t");
        if (!grid) grid = std::make_shared<Grid>(nx, ny, lx, ly);
        if (nx != grid->nx() || ny != grid->ny())
            throw std::runtime_error("snapshot grid mismatch at " + b);
        SpectralField u(grid);
        auto& v = u.values_mut();
        std::ifstream raw(dir + "/" + b + ".f64", std::ios::binary);
        if (!raw) throw std::runtime_error("cannot open raw data for " + b);
        raw.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (raw.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
            throw std::runtime_error("short snapshot file for " + b);
        traj.add(t, std::move(u));
    }
    return traj;
}

StopReason execute_run(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    auto grid = std::make_shared<Grid>(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    ModelParams p = build_model(cfg);
    SpectralField u0 = initial_data(grid, cfg.initial);

    RunResult res = run(u0, p, cfg.stepper);

    {
        std::ofstream c(out_dir + "/config.json", std::ios::binary | std::ios::trunc);
        if (!c) throw std::runtime_error("cannot write config to " + out_dir);
        c << canonical_config_json(cfg);
    }
    write_diagnostics_csv(out_dir + "/diagnostics.csv", res.diags);
    const auto& snaps = res.traj.snapshots();
    for (std::size_t i = 0; i < snaps.size(); ++i)
        save_snapshot(out_dir + "/snapshots", static_cast<int>(i), snaps[i].t, snaps[i].u);

    std::string report = build_report(out_dir);
    std::ofstream r(out_dir + "/report.json", std::ios::binary | std::ios::trunc);
    if (!r) throw std::runtime_error("cannot write report to " + out_dir);
    r << report;
    return res.stop;
}

namespace {

struct GridArgmin {
    double x = 0.0, y = 0.0, value = 0.0;
};

GridArgmin argmin_field(const SpectralField& f) {
    const Grid& g = f.grid();
    const auto& v = f.values();
    GridArgmin out;
    out.value = v[0];
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < out.value) {
            out.value = v[i];
            best = i;
        }
    out.x = g.x(static_cast<int>(best % g.nx()));
    out.y = g.y(static_cast<int>(best / g.nx()));
    return out;
}

const char* verdict_name(ConditionVerdict v) {
    switch (v) {
        case ConditionVerdict::holds_strict: return "holds_strict";
        case ConditionVerdict::holds_weak: return "holds_weak";
        case ConditionVerdict::fails: return "fails";
    }
    return "unknown";
}

} // namespace

std::string build_report(const std::string& run_dir) {
    if (!fs::is_directory(run_dir)) throw std::runtime_error("run directory missing: " + run_dir);
    RunConfig cfg = load_config(run_dir + "/config.json");
    std::vector<DiagnosticRecord> diags = read_diagnostics_csv(run_dir + "/diagnostics.csv");
    if (diags.empty()) throw std::runtime_error("no diagnostics in " + run_dir);
    Trajectory traj = load_trajectory(run_dir + "/snapshots");
    ModelParams p = build_model(cfg);
    const Grid& g = traj.snapshots().front().u.grid();

    json doc;
    doc["version"] = cfg.version;
    {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        doc["config_hash"] = buf;
    }

    // Stop reason reconstructed from the persisted record stream.
    const DiagnosticRecord& last = diags.back();
    const char* stop_kind;
    if (!last.finite)
        stop_kind = "non_finite";
    else if (last.grad_inf >= cfg.stepper.grad_stop)
        stop_kind = "gradient_threshold";
    else if (last.t >= cfg.stepper.t_end - cfg.stepper.dt_floor)
        stop_kind = "horizon_reached";
    else
        stop_kind = "step_floor";
    doc["stop"] = {{"kind", stop_kind}, {"t_stop", last.t}};

    double e0 = diags.front().conserved;
    double drift = 0.0;
    for (const auto& d : diags)
        if (d.finite && e0 > 0.0) drift = std::max(drift, std::abs(d.conserved - e0) / e0);
    doc["energy"] = {{"conserved_initial", e0}, {"relative_drift", drift}};

    // Slope bound along a single characteristic.
    const SpectralField& u0 = traj.snapshots().front().u;
    GridArgmin seed = argmin_field(ddx(u0));
    double x0 = cfg.analysis.char_x0.value_or(seed.x);
    double y0 = cfg.analysis.char_y0.value_or(seed.y);
    double m0 = diags.front().min_ux;

    json slope;
    slope["m0"] = m0;
    slope["seed"] = {{"x0", x0}, {"y0", y0}};
    if (traj.snapshots().size() >= 2) {
        CharacteristicTrace trace = track(traj, p, x0, y0);
        double w_floor = cfg.analysis.k_window_factor * m0;
        double k_emp = empirical_K(trace, w_floor);
        slope["k_emp"] = k_emp;
        slope["k_window_floor"] = w_floor;
        RiccatiBound rb = t_star_bound(m0, k_emp, p.gamma);
        if (rb.t_star) {
            slope["t_star"] = *rb.t_star;
            // Earliest time min_ux is observed below 10 m0.
            double cross = -1.0;
            for (const auto& d : diags)
                if (d.finite && d.min_ux <= 10.0 * m0) {
                    cross = d.t;
                    break;
                }
            bool stopped = std::string(stop_kind) == "gradient_threshold";
            if (cross >= 0.0) slope["crossing_time"] = cross;
            if (cross >= 0.0 && cross <= 1.10 * *rb.t_star && stopped &&
                last.t <= 1.10 * *rb.t_star)
                slope["verdict"] = "breaking_before_bound";
            else if (cross >= 0.0 || stopped)
                slope["verdict"] = "breaking_after_bound";
            else
                slope["verdict"] = "no_breaking_observed";
        } else {
            slope["verdict"] = "not_applicable";
        }
    }
    doc["slope_bound"] = slope;

    // Weighted transverse-average bound.
    json weighted;
    if (traj.snapshots().size() >= 2) {
        WeightSpec w = make_gaussian_weight(g, cfg.analysis.weight_sigma, y0);
        M1Series m1 = weighted_M1(traj, p, x0, w);
        double m1_0 = m1.m1.front();
        weighted["m1_0"] = m1_0;
        double floor = -10.0 * std::abs(m1_0);
        double d_max = empirical_D(m1, p.gamma, floor);
        weighted["d_max"] = d_max;
        C3Result c3 = c3_and_t0(u0, w, p.gamma, cfg.analysis.c_user, cfg.analysis.xs_order, x0);
        weighted["c3"] = c3.c3;
        double k_eff = std::max(d_max, 0.0);
        if (m1_0 < -std::sqrt(2.0 * k_eff / p.gamma)) {
            RiccatiBound rb = t_star_bound(m1_0, k_eff, 0.5 * p.gamma);
            weighted["t0"] = rb.t_star ? *rb.t_star : -1.0;
            double cross = -1.0;
            for (std::size_t i = 0; i < m1.t.size(); ++i)
                if (m1.m1[i] <= floor) {
                    cross = m1.t[i];
                    break;
                }
            if (cross >= 0.0) weighted["crossing_time"] = cross;
            if (rb.t_star && cross >= 0.0 && cross <= 1.10 * *rb.t_star)
                weighted["verdict"] = "divergence_before_bound";
            else if (cross >= 0.0)
                weighted["verdict"] = "divergence_after_bound";
            else
                weighted["verdict"] = "no_divergence_observed";
        } else {
            weighted["verdict"] = "not_applicable";
        }
    }
    doc["weighted_bound"] = weighted;

    // Vanishing-set probe.
    json liou;
    LiouvilleCheck lc = check_liouville_condition(p, cfg.analysis.umin, cfg.analysis.umax,
                                                  cfg.analysis.n_samples);
    liou["condition"] = verdict_name(lc.verdict);
    liou["condition_min_margin"] = lc.min_margin;
    if (lc.verdict == ConditionVerdict::fails) liou["condition_fail_at"] = lc.fail_at;
    VanishReport vr = vanish_scan(traj, cfg.analysis.liouville_tol);
    liou["vanish_tol"] = vr.tol;
    liou["vanish_largest_cells"] = vr.largest_cells;
    liou["vanish_largest_area"] = vr.largest_area;
    double q_min = 0.0;
    bool q_first = true;
    for (const auto& s : traj.snapshots()) {
        double m = min_value(q_functional(s.u, p));
        q_min = q_first ? m : std::min(q_min, m);
        q_first = false;
    }
    liou["q_min"] = q_min;
    doc["liouville"] = liou;

    return doc.dump(2) + "\n";
}

namespace {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

// One polyline chart; skips non-finite points.
void append_chart(std::ostream& svg, double ox, double oy, double w, double h,
                  const std::string& title, const std::vector<Series>& series) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) { xmin = 0; xmax = 1; }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-300) xmax = xmin + 1;
    if (ymax - ymin < 1e-300) ymax = ymin + 1;

    auto px = [&](double v) { return ox + (v - xmin) / (xmax - xmin) * w; };
    auto py = [&](double v) { return oy + h - (v - ymin) / (ymax - ymin) * h; };

    svg << "<rect x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << ox << "\" y=\"" << oy - 8 << "\" font-size=\"14\">" << title
        << "</text>\n";
    svg << "<text x=\"" << ox << "\" y=\"" << oy + h + 16 << "\" font-size=\"10\">" << fmt17(xmin)
        << "</text>\n";
    svg << "<text x=\"" << ox + w - 60 << "\" y=\"" << oy + h + 16 << "\" font-size=\"10\">"
        << fmt17(xmax) << "</text>\n";
    svg << "<text x=\"" << ox - 4 << "\" y=\"" << oy + h << "\" font-size=\"10\" text-anchor=\"end\">"
        << fmt17(ymin) << "</text>\n";
    svg << "<text x=\"" << ox - 4 << "\" y=\"" << oy + 10
        << "\" font-size=\"10\" text-anchor=\"end\">" << fmt17(ymax) << "</text>\n";

    double ly = oy + 14;
    for (const auto& s : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << ox + w + 8 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\""
            << s.color << "\">" << s.label << "</text>\n";
        ly += 14;
    }
}

} // namespace

void write_plots(const std::string& run_dir, const std::string& out_file) {
    RunConfig cfg = load_config(run_dir + "/config.json");
    std::vector<DiagnosticRecord> diags = read_diagnostics_csv(run_dir + "/diagnostics.csv");
    if (diags.empty()) throw std::runtime_error("no diagnostics in " + run_dir);
    Trajectory traj = load_trajectory(run_dir + "/snapshots");
    ModelParams p = build_model(cfg);
    const Grid& g = traj.snapshots().front().u.grid();

    auto log10_clip = [](double v) { return std::log10(std::max(v, 1e-300)); };

    Series sc{"log10 conserved", "#1f77b4", {}, {}};
    Series sx{"log10 Xs norm", "#2ca02c", {}, {}};
    Series sg{"log10 grad_inf", "#d62728", {}, {}};
    for (const auto& d : diags) {
        if (!d.finite) continue;
        sc.x.push_back(d.t);
        sc.y.push_back(log10_clip(d.conserved));
        sx.x.push_back(d.t);
        sx.y.push_back(log10_clip(d.xs_norm));
        sg.x.push_back(d.t);
        sg.y.push_back(log10_clip(d.grad_inf));
    }

    // Slope against its comparison envelope.
    double m0 = diags.front().min_ux;
    GridArgmin seed = argmin_field(ddx(traj.snapshots().front().u));
    double x0 = cfg.analysis.char_x0.value_or(seed.x);
    double y0 = cfg.analysis.char_y0.value_or(seed.y);

    Series smin{"min_ux", "#1f77b4", {}, {}};
    Series senv{"envelope", "#d62728", {}, {}};
    for (const auto& d : diags)
        if (d.finite) {
            smin.x.push_back(d.t);
            smin.y.push_back(std::max(d.min_ux, 20.0 * m0));
        }
    Series sm1{"M1", "#1f77b4", {}, {}};
    Series sm1env{"envelope", "#d62728", {}, {}};

    if (traj.snapshots().size() >= 2) {
        CharacteristicTrace trace = track(traj, p, x0, y0);
        double k_emp = empirical_K(trace, cfg.analysis.k_window_factor * m0);
        RiccatiBound rb = t_star_bound(m0, k_emp, p.gamma);
        if (rb.t_star) {
            for (const auto& d : diags) {
                if (d.t >= *rb.t_star) break;
                double e = riccati_lower_envelope(-m0, k_emp, p.gamma, d.t);
                senv.x.push_back(d.t);
                senv.y.push_back(std::max(-e, 20.0 * m0));
            }
        }
        WeightSpec w = make_gaussian_weight(g, cfg.analysis.weight_sigma, y0);
        M1Series m1 = weighted_M1(traj, p, x0, w);
        double m1_0 = m1.m1.front();
        double d_max = empirical_D(m1, p.gamma, -10.0 * std::abs(m1_0));
        for (std::size_t i = 0; i < m1.t.size(); ++i) {
            sm1.x.push_back(m1.t[i]);
            sm1.y.push_back(std::max(m1.m1[i], -20.0 * std::abs(m1_0)));
        }
        double k_eff = std::max(d_max, 0.0);
        if (m1_0 < -std::sqrt(2.0 * k_eff / p.gamma)) {
            RiccatiBound rb2 = t_star_bound(m1_0, k_eff, 0.5 * p.gamma);
            for (double t : m1.t) {
                if (rb2.t_star && t >= *rb2.t_star) break;
                double e = riccati_lower_envelope(-m1_0, k_eff, 0.5 * p.gamma, t);
                sm1env.x.push_back(t);
                sm1env.y.push_back(std::max(-e, -20.0 * std::abs(m1_0)));
            }
        }
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"840\" "
           "font-family=\"sans-serif\">\n";
    append_chart(svg, 70, 40, 520, 200, "diagnostics vs t", {sc, sx, sg});
    append_chart(svg, 70, 320, 520, 200, "weighted slope average vs bound", {sm1, sm1env});
    append_chart(svg, 70, 600, 520, 200, "min slope vs bound", {smin, senv});
    svg << "</svg>\n";

    std::ofstream f(out_file, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + out_file);
    f << svg.str();
}

std::string presets_listing() {
    std::ostringstream out;
    out << "model presets:\n"
        << "  classical        g(u) = 2*kappa*u + 3u^2   (kappa, default 1)\n"
        << "  quadratic_pure   g(u) = 3u^2\n"
        << "  cubic            g(u) = u^3\n"
        << "  quartic          g(u) = u^4\n"
        << "  polynomial       g(u) = sum coeffs[k] u^(k+1)\n"
        << "initial data presets:\n"
        << "  smooth_small     a sin(2 pi x/lx) cos(2 pi y/ly)         (amplitude, default 1e-2)\n"
        << "  steep_front      -a sin(k (x-lx/2)) exp(-((x-lx/2)^2 + b (y-ly/2)^2)/sigma^2)\n"
        << "                   (amplitude | target_m0; sigma 1.5; b 1; steepness 1)\n"
        << "  localized_bump   a exp(-((x-lx/2)^2 + b (y-ly/2)^2)/sigma^2), x-mean removed\n"
        << "  y_modulated      a sin(2 pi x/lx) (1 + eps cos(2 pi y/ly))  (eps 0.25)\n";
    return out.str();
}

} // namespace chkp
