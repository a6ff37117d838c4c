#include "splash/scene.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace splash {

double Scene::max_depth() const {
    if (depth_table.empty()) return depth;
    double m = 0.0;
    for (double d : depth_table)
        if (d > m) m = d;
    return m;
}

namespace scene {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double_token(const std::string& tok, int line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw SceneError(line, "malformed number '" + tok + "'");
    return v;
}

/// Number with optional fraction syntax: "1/300" means the quotient.
double parse_number(const std::string& v, int line) {
    std::size_t slash = v.find('/');
    if (slash != std::string::npos) {
        double num = parse_double_token(trim(v.substr(0, slash)), line);
        double den = parse_double_token(trim(v.substr(slash + 1)), line);
        if (den == 0.0) throw SceneError(line, "fraction with zero denominator");
        return num / den;
    }
    return parse_double_token(v, line);
}

int parse_count(const std::string& v, int line) {
    const char* begin = v.c_str();
    char* end = nullptr;
    errno = 0;
    long n = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE || n < 0 || n > 1000000)
        throw SceneError(line, "malformed integer '" + v + "'");
    return static_cast<int>(n);
}

std::uint64_t parse_seed(const std::string& v, int line) {
    const char* begin = v.c_str();
    char* end = nullptr;
    errno = 0;
    unsigned long long n = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE)
        throw SceneError(line, "malformed seed '" + v + "'");
    return n;
}

BoundaryRule parse_edge(const std::string& v, int line) {
    if (v == "wall") return {BoundaryRule::Kind::Wall, 0.0};
    return {BoundaryRule::Kind::Constant, parse_number(v, line)};
}

struct Parser {
    Scene sc;
    std::string section;
    bool saw_nx = false, saw_ny = false;
    bool saw_dx = false, saw_dy = false, saw_ext_x = false, saw_ext_y = false;
    bool saw_depth = false;
    double extent_x = 0, extent_y = 0;
    std::vector<std::pair<int, std::string>> depth_rows;  // (line, raw values)

    [[noreturn]] void unknown_key(const std::string& key, int line) const {
        throw SceneError(line, "unknown key '" + key + "' in [" + section + "]");
    }

    void handle(const std::string& key, const std::string& val, int line) {
        if (section.empty())
            throw SceneError(line, "key '" + key + "' before any [section]");
        if (section == "grid")
            grid_key(key, val, line);
        else if (section == "fluid")
            fluid_key(key, val, line);
        else if (section == "sim")
            sim_key(key, val, line);
        else if (section == "spray")
            spray_key(key, val, line);
        else if (section == "object")
            object_key(key, val, line);
        else
            output_key(key, val, line);
    }

    void grid_key(const std::string& key, const std::string& val, int line) {
        if (key == "nx") {
            sc.nx = parse_count(val, line);
            saw_nx = true;
        } else if (key == "ny") {
            sc.ny = parse_count(val, line);
            saw_ny = true;
        } else if (key == "dx") {
            if (saw_ext_x) throw SceneError(line, "dx conflicts with extent_x");
            sc.params.dx = parse_number(val, line);
            saw_dx = true;
        } else if (key == "dy") {
            if (saw_ext_y) throw SceneError(line, "dy conflicts with extent_y");
            sc.params.dy = parse_number(val, line);
            saw_dy = true;
        } else if (key == "extent_x") {
            if (saw_dx) throw SceneError(line, "extent_x conflicts with dx");
            extent_x = parse_number(val, line);
            saw_ext_x = true;
        } else if (key == "extent_y") {
            if (saw_dy) throw SceneError(line, "extent_y conflicts with dy");
            extent_y = parse_number(val, line);
            saw_ext_y = true;
        } else if (key == "west") {
            sc.boundary.west = parse_edge(val, line);
        } else if (key == "east") {
            sc.boundary.east = parse_edge(val, line);
        } else if (key == "south") {
            sc.boundary.south = parse_edge(val, line);
        } else if (key == "north") {
            sc.boundary.north = parse_edge(val, line);
        } else {
            unknown_key(key, line);
        }
    }

    void fluid_key(const std::string& key, const std::string& val, int line) {
        if (key == "rho")
            sc.params.rho = parse_number(val, line);
        else if (key == "g")
            sc.params.g = parse_number(val, line);
        else if (key == "p0")
            sc.params.p0 = parse_number(val, line);
        else if (key == "diag_coupling")
            sc.params.diag_coupling = parse_number(val, line);
        else if (key == "depth") {
            if (!depth_rows.empty())
                throw SceneError(line, "depth conflicts with depth_row");
            sc.depth = parse_number(val, line);
            saw_depth = true;
        } else if (key == "depth_row") {
            if (saw_depth) throw SceneError(line, "depth_row conflicts with depth");
            depth_rows.emplace_back(line, val);
        } else {
            unknown_key(key, line);
        }
    }

    void sim_key(const std::string& key, const std::string& val, int line) {
        if (key == "dt")
            sc.params.dt = parse_number(val, line);
        else if (key == "duration")
            sc.duration = parse_number(val, line);
        else if (key == "damping")
            sc.params.damping = parse_number(val, line);
        else if (key == "seed")
            sc.params.seed = parse_seed(val, line);
        else if (key == "ground_z")
            sc.ground_z = parse_number(val, line);
        else
            unknown_key(key, line);
    }

    void spray_key(const std::string& key, const std::string& val, int line) {
        if (key == "threshold")
            sc.params.spray_threshold = parse_number(val, line);
        else if (key == "particle_volume")
            sc.params.particle_volume = parse_number(val, line);
        else if (key == "spawn_fraction")
            sc.params.spawn_fraction = parse_number(val, line);
        else
            unknown_key(key, line);
    }

    void object_key(const std::string& key, const std::string& val, int line) {
        ObjectSpec& obj = sc.objects.back();
        if (key == "mass")
            obj.mass = parse_number(val, line);
        else if (key == "x")
            obj.x = parse_number(val, line);
        else if (key == "y")
            obj.y = parse_number(val, line);
        else if (key == "s")
            obj.s = parse_number(val, line);
        else if (key == "s_dot")
            obj.s_dot = parse_number(val, line);
        else if (key == "alpha")
            obj.alpha = parse_number(val, line);
        else if (key == "contact_ramp")
            obj.contact_ramp = parse_number(val, line);
        else if (key == "active_from")
            obj.active_from = parse_number(val, line);
        else if (key == "ellipsoid") {
            auto toks = split_ws(val);
            if (toks.size() != 6)
                throw SceneError(line, "ellipsoid needs 6 values: ox oy oz a b c");
            Ellipsoid e;
            e.ox = parse_double_token(toks[0], line);
            e.oy = parse_double_token(toks[1], line);
            e.oz = parse_double_token(toks[2], line);
            e.a = parse_double_token(toks[3], line);
            e.b = parse_double_token(toks[4], line);
            e.c = parse_double_token(toks[5], line);
            obj.ellipsoids.push_back(e);
        } else {
            unknown_key(key, line);
        }
    }

    void output_key(const std::string& key, const std::string& val, int line) {
        if (key == "frame_interval")
            sc.frame_interval = parse_number(val, line);
        else if (key == "format") {
            if (val != "bin" && val != "text")
                throw SceneError(line, "format must be 'bin' or 'text'");
            sc.format = val;
        } else {
            unknown_key(key, line);
        }
    }

    void enter_section(const std::string& name, int line) {
        static const char* known[] = {"grid", "fluid", "sim", "spray", "object", "output"};
        bool ok = std::any_of(std::begin(known), std::end(known),
                              [&](const char* k) { return name == k; });
        if (!ok) throw SceneError(line, "unknown section [" + name + "]");
        section = name;
        if (name == "object") sc.objects.emplace_back();
    }

    Scene finish() {
        if (!saw_nx) throw SceneError(0, "missing required key 'nx' in [grid]");
        if (!saw_ny) throw SceneError(0, "missing required key 'ny' in [grid]");
        if (!saw_dx && !saw_ext_x)
            throw SceneError(0, "missing 'dx' or 'extent_x' in [grid]");
        if (sc.nx < 1 || sc.ny < 1) throw SceneError(0, "nx and ny must be positive");
        if (saw_ext_x) sc.params.dx = extent_x / sc.nx;
        if (saw_ext_y)
            sc.params.dy = extent_y / sc.ny;
        else if (!saw_dy)
            sc.params.dy = sc.params.dx;  // square cells unless told otherwise

        if (!depth_rows.empty()) {
            if (static_cast<int>(depth_rows.size()) != sc.ny)
                throw SceneError(depth_rows.back().first,
                                 "expected " + std::to_string(sc.ny) + " depth_row lines, got " +
                                     std::to_string(depth_rows.size()));
            sc.depth_table.reserve(std::size_t(sc.nx) * sc.ny);
            for (auto& [line, raw] : depth_rows) {
                auto toks = split_ws(raw);
                if (static_cast<int>(toks.size()) != sc.nx)
                    throw SceneError(line, "depth_row needs " + std::to_string(sc.nx) +
                                               " values, got " + std::to_string(toks.size()));
                for (auto& t : toks) sc.depth_table.push_back(parse_double_token(t, line));
            }
            sc.depth = 0.0;
        }
        validate(sc);
        return std::move(sc);
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void render_edge(std::string& out, const char* name, const BoundaryRule& r) {
    out += name;
    out += " = ";
    out += r.kind == BoundaryRule::Kind::Wall ? "wall" : fmt(r.q);
    out += '\n';
}

}  // namespace

Scene parse(const std::string& text) {
    Parser ps;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw SceneError(line, "unterminated section header");
            ps.enter_section(trim(s.substr(1, s.size() - 2)), line);
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw SceneError(line, "expected 'key = value' or '[section]'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw SceneError(line, "empty key");
        if (val.empty()) throw SceneError(line, "empty value for key '" + key + "'");
        ps.handle(key, val, line);
    }
    return ps.finish();
}

std::string render(const Scene& sc) {
    std::string out;
    out += "[grid]\n";
    out += "nx = " + std::to_string(sc.nx) + '\n';
    out += "ny = " + std::to_string(sc.ny) + '\n';
    out += "dx = " + fmt(sc.params.dx) + '\n';
    out += "dy = " + fmt(sc.params.dy) + '\n';
    render_edge(out, "west", sc.boundary.west);
    render_edge(out, "east", sc.boundary.east);
    render_edge(out, "south", sc.boundary.south);
    render_edge(out, "north", sc.boundary.north);

    out += "\n[fluid]\n";
    out += "rho = " + fmt(sc.params.rho) + '\n';
    out += "g = " + fmt(sc.params.g) + '\n';
    out += "p0 = " + fmt(sc.params.p0) + '\n';
    out += "diag_coupling = " + fmt(sc.params.diag_coupling) + '\n';
    if (sc.depth_table.empty()) {
        out += "depth = " + fmt(sc.depth) + '\n';
    } else {
        for (int j = 0; j < sc.ny; ++j) {
            out += "depth_row =";
            for (int i = 0; i < sc.nx; ++i) {
                out += ' ';
                out += fmt(sc.depth_table[std::size_t(j) * sc.nx + i]);
            }
            out += '\n';
        }
    }

    out += "\n[sim]\n";
    out += "dt = " + fmt(sc.params.dt) + '\n';
    out += "duration = " + fmt(sc.duration) + '\n';
    out += "damping = " + fmt(sc.params.damping) + '\n';
    out += "seed = " + std::to_string(sc.params.seed) + '\n';
    out += "ground_z = " + fmt(sc.ground_z) + '\n';

    out += "\n[spray]\n";
    out += "threshold = " + fmt(sc.params.spray_threshold) + '\n';
    out += "particle_volume = " + fmt(sc.params.particle_volume) + '\n';
    out += "spawn_fraction = " + fmt(sc.params.spawn_fraction) + '\n';

    for (const ObjectSpec& obj : sc.objects) {
        out += "\n[object]\n";
        out += "mass = " + fmt(obj.mass) + '\n';
        out += "x = " + fmt(obj.x) + '\n';
        out += "y = " + fmt(obj.y) + '\n';
        out += "s = " + fmt(obj.s) + '\n';
        out += "s_dot = " + fmt(obj.s_dot) + '\n';
        out += "alpha = " + fmt(obj.alpha) + '\n';
        out += "contact_ramp = " + fmt(obj.contact_ramp) + '\n';
        out += "active_from = " + fmt(obj.active_from) + '\n';
        for (const Ellipsoid& e : obj.ellipsoids) {
            out += "ellipsoid = " + fmt(e.ox) + ' ' + fmt(e.oy) + ' ' + fmt(e.oz) + ' ' +
                   fmt(e.a) + ' ' + fmt(e.b) + ' ' + fmt(e.c) + '\n';
        }
    }

    out += "\n[output]\n";
    out += "frame_interval = " + fmt(sc.frame_interval) + '\n';
    out += "format = " + sc.format + '\n';
    return out;
}

Scene load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError(0, "cannot open scene file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void validate(const Scene& sc) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw SceneError(0, what);
    };
    require(sc.nx >= 2 && sc.ny >= 2,
            "grid needs nx >= 2 and ny >= 2 (the surface mesh sits between columns)");
    try {
        sc.params.validate();
    } catch (const std::invalid_argument& e) {
        throw SceneError(0, e.what());
    }
    require(sc.duration > 0.0, "duration must be > 0");
    require(std::isfinite(sc.ground_z), "ground_z must be finite");
    require(sc.depth >= 0.0, "depth must be >= 0");
    if (!sc.depth_table.empty()) {
        require(sc.depth_table.size() == std::size_t(sc.nx) * sc.ny,
                "depth table dimensions do not match nx*ny");
        for (double d : sc.depth_table) require(d >= 0.0, "depth_row values must be >= 0");
    }
    require(sc.frame_interval > 0.0, "frame_interval must be > 0");
    require(sc.format == "bin" || sc.format == "text", "format must be 'bin' or 'text'");
    for (std::size_t k = 0; k < sc.objects.size(); ++k) {
        const ObjectSpec& obj = sc.objects[k];
        std::string tag = "object " + std::to_string(k) + ": ";
        require(!obj.ellipsoids.empty(), tag + "needs at least one ellipsoid");
        require(obj.mass > 0.0, tag + "mass must be > 0");
        require(obj.alpha >= 0.0 && obj.alpha <= 1.0, tag + "alpha must be in [0, 1]");
        require(obj.contact_ramp >= 0.0, tag + "contact_ramp must be >= 0");
        for (const Ellipsoid& e : obj.ellipsoids)
            require(e.a > 0.0 && e.b > 0.0 && e.c > 0.0, tag + "semi-axes must be > 0");
    }
}

scene::CflReport cfl_report(const Scene& sc) {
    CflReport rep;
    rep.max_depth = sc.max_depth();
    rep.bound = cfl_bound(sc.params, rep.max_depth);
    rep.dt = sc.params.dt;
    rep.ok = rep.dt <= rep.bound;
    return rep;
}

}  // namespace scene
}  // namespace splash
