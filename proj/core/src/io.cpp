#include "fracplanar/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fracplanar {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ParseError("system spec: " + what); }

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where + " must be a number");
    return j.get<double>();
}

std::vector<NonlinearTerm> parse_terms(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + " must be an array of [coef, p1, p2] triples");
    std::vector<NonlinearTerm> terms;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 3)
            fail(where + " entries must be [coef, p1, p2] triples");
        const double coef = number_at(item[0], where + " coefficient");
        const double p1 = number_at(item[1], where + " power");
        const double p2 = number_at(item[2], where + " power");
        if (p1 != std::floor(p1) || p2 != std::floor(p2))
            fail(where + " powers must be integers");
        terms.push_back({coef, static_cast<int>(p1), static_cast<int>(p2)});
    }
    return terms;
}

} // namespace

PlanarSystem system_from_json(const std::string& text, bool allow_equal_orders) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top level must be an object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "alpha" && key != "A" && key != "forcing" && key != "nonlinearity")
            fail("unknown key '" + key + "'");
    }

    if (!doc.contains("alpha") || !doc["alpha"].is_array() || doc["alpha"].size() != 2)
        fail("'alpha' must be an array [alpha1, alpha2]");
    const double a1 = number_at(doc["alpha"][0], "alpha1");
    const double a2 = number_at(doc["alpha"][1], "alpha2");

    if (!doc.contains("A") || !doc["A"].is_array() || doc["A"].size() != 2)
        fail("'A' must be a 2x2 array of rows");
    Mat2 A;
    double* rows[2][2] = {{&A.a11, &A.a12}, {&A.a21, &A.a22}};
    for (int r = 0; r < 2; ++r) {
        const auto& row = doc["A"][r];
        if (!row.is_array() || row.size() != 2) fail("'A' rows must hold two numbers");
        for (int c = 0; c < 2; ++c)
            *rows[r][c] = number_at(row[c], "A entry");
    }

    Forcing forcing = Forcing::none();
    if (doc.contains("forcing")) {
        const auto& f = doc["forcing"];
        if (f.is_string()) {
            const std::string kind = f.get<std::string>();
            if (kind == "paper")
                forcing = Forcing::paper();
            else if (kind != "none")
                fail("'forcing' string must be \"paper\" or \"none\"");
        } else if (f.is_object()) {
            for (const auto& [key, value] : f.items()) {
                (void)value;
                if (key != "table") fail("unknown key '" + key + "' in 'forcing'");
            }
            if (!f.contains("table") || !f["table"].is_array())
                fail("'forcing' object must hold a 'table' array");
            std::vector<std::array<double, 3>> rows_v;
            for (const auto& row : f["table"]) {
                if (!row.is_array() || row.size() != 3)
                    fail("'forcing' table rows must be [t, f1, f2]");
                rows_v.push_back({number_at(row[0], "forcing t"),
                                  number_at(row[1], "forcing f1"),
                                  number_at(row[2], "forcing f2")});
            }
            try {
                forcing = Forcing::table(std::move(rows_v));
            } catch (const Error& e) {
                fail(e.what());
            }
        } else {
            fail("'forcing' must be a string or a {table: ...} object");
        }
    }

    Nonlinearity fnl;
    if (doc.contains("nonlinearity")) {
        const auto& g = doc["nonlinearity"];
        if (!g.is_object()) fail("'nonlinearity' must be an object with keys x1/x2");
        for (const auto& [key, value] : g.items()) {
            (void)value;
            if (key != "x1" && key != "x2") fail("unknown key '" + key + "' in 'nonlinearity'");
        }
        std::vector<NonlinearTerm> f1, f2;
        if (g.contains("x1")) f1 = parse_terms(g["x1"], "nonlinearity x1");
        if (g.contains("x2")) f2 = parse_terms(g["x2"], "nonlinearity x2");
        fnl = Nonlinearity(std::move(f1), std::move(f2));
    }

    const PlanarSystem sys{FracOrders(a1, a2, allow_equal_orders), A, forcing, fnl};
    return validate(sys);
}

PlanarSystem load_system(const std::string& path, bool allow_equal_orders) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open system spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return system_from_json(buf.str(), allow_equal_orders);
}

std::string system_to_json(const PlanarSystem& system) {
    json doc;
    doc["alpha"] = {system.orders.alpha1(), system.orders.alpha2()};
    doc["A"] = {{system.A.a11, system.A.a12}, {system.A.a21, system.A.a22}};
    switch (system.forcing.kind()) {
        case Forcing::Kind::None: break;
        case Forcing::Kind::Paper: doc["forcing"] = "paper"; break;
        case Forcing::Kind::Table: {
            json rows = json::array();
            for (const auto& r : system.forcing.rows()) rows.push_back({r[0], r[1], r[2]});
            doc["forcing"] = {{"table", rows}};
            break;
        }
    }
    if (!system.fnl.empty()) {
        json g = json::object();
        for (int i : {1, 2}) {
            json terms = json::array();
            for (const auto& t : system.fnl.component(i))
                terms.push_back({t.coef, t.p1, t.p2});
            if (!terms.empty()) g[i == 1 ? "x1" : "x2"] = terms;
        }
        doc["nonlinearity"] = g;
    }
    return doc.dump(2);
}

namespace {

void write_rows(std::ostream& out, const Trajectory& traj, double scale_nu, bool scaled) {
    out << (scaled ? "t,tnu_x1,tnu_x2\n" : "t,x1,x2\n");
    char line[128];
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.t(k);
        const double w = scaled ? std::pow(t, scale_nu) : 1.0;
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", t, w * traj.samples[k].x1,
                      w * traj.samples[k].x2);
        out << line;
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    write_rows(out, traj, 0.0, false);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    write_rows(out, traj, 0.0, false);
}

void write_scaled_csv(std::ostream& out, const Trajectory& traj, double nu) {
    write_rows(out, traj, nu, true);
}

void write_scaled_csv(const std::string& path, const Trajectory& traj, double nu) {
    auto out = open_out(path);
    write_rows(out, traj, nu, true);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trajectory CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,", 0) != 0)
        throw ParseError("trajectory CSV must start with a t,... header: " + path);
    std::vector<double> ts;
    std::vector<Vec2> xs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t = 0.0, x1 = 0.0, x2 = 0.0;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &t, &x1, &x2) != 3)
            throw ParseError("bad CSV row '" + line + "' in " + path);
        ts.push_back(t);
        xs.push_back({x1, x2});
    }
    if (ts.size() < 2) throw ParseError("trajectory CSV needs at least two rows: " + path);
    Trajectory traj;
    traj.t0 = ts.front();
    traj.h = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    for (std::size_t k = 0; k < ts.size(); ++k)
        if (std::abs(ts[k] - (traj.t0 + traj.h * static_cast<double>(k))) >
            1e-9 * std::max(1.0, std::abs(ts[k])))
            throw ParseError("trajectory CSV grid is not uniform: " + path);
    traj.samples = std::move(xs);
    return traj;
}

} // namespace fracplanar
