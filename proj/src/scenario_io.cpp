#include "leafspace/scenario_io.hpp"

#include <fstream>

#include "leafspace/error.hpp"

namespace leafspace {

using nlohmann::json;

GroupKind parse_group_kind(const std::string& s) {
    if (s == "circle") return GroupKind::circle;
    if (s == "line") return GroupKind::line;
    fail(ErrorCode::invalid_config, "group must be 'circle' or 'line', got '" + s + "'");
}

namespace {

Vec vec_from_json(const json& j) {
    if (!j.is_array() || j.size() > static_cast<size_t>(Vec::kMaxDim))
        fail(ErrorCode::invalid_config, "expected a short number array");
    Vec v(static_cast<int>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

RegionPtr region_from_json(const json& j, int dim) {
    std::string type = j.at("type").get<std::string>();
    if (type == "disc") {
        Vec c = j.contains("center") ? vec_from_json(j.at("center")) : Vec::zero(dim);
        return make_disc(c, j.at("radius").get<double>());
    }
    if (type == "full_space") return make_full_space(dim);
    if (type == "half_plane")
        return make_half_plane(vec_from_json(j.at("point")), vec_from_json(j.at("normal")));
    if (type == "wedge")
        return make_wedge(j.at("r_min").get<double>(), j.at("axis").get<double>(),
                          j.at("half_width").get<double>());
    if (type == "slit")
        return make_slit(vec_from_json(j.at("from")), vec_from_json(j.at("to")),
                         j.value("eps", 1e-9));
    fail(ErrorCode::invalid_config, "unknown region type '" + type + "'");
}

/// One polynomial component: list of {exp: [e0,...], coef: c} monomials.
struct PolyTable {
    struct Term {
        std::vector<int> exp;
        double coef;
    };
    std::vector<std::vector<Term>> per_coordinate;

    Vec eval(const Vec& x) const {
        Vec out(static_cast<int>(per_coordinate.size()));
        for (size_t c = 0; c < per_coordinate.size(); ++c) {
            double v = 0.0;
            for (const Term& t : per_coordinate[c]) {
                double mono = t.coef;
                for (size_t i = 0; i < t.exp.size(); ++i)
                    for (int p = 0; p < t.exp[i]; ++p) mono *= x[static_cast<int>(i)];
                v += mono;
            }
            out[static_cast<int>(c)] = v;
        }
        return out;
    }
};

VectorField field_from_json(const json& j, int dim, int n_hint) {
    if (j.contains("name")) {
        std::string name = j.at("name").get<std::string>();
        if (name == "rotation") {
            int n = j.value("n", n_hint);
            if (n <= 2) fail(ErrorCode::invalid_config, "rotation field needs n > 2");
            const double omega = kTurn / n;
            return [omega](const Vec& z) { return Vec{-omega * z[1], omega * z[0]}; };
        }
        fail(ErrorCode::invalid_config, "unknown named field '" + name + "'");
    }
    if (!j.contains("poly")) fail(ErrorCode::invalid_config, "field needs 'name' or 'poly'");
    PolyTable table;
    for (const auto& coord : j.at("poly")) {
        std::vector<PolyTable::Term> terms;
        for (const auto& t : coord) {
            PolyTable::Term term;
            term.coef = t.at("coef").get<double>();
            for (const auto& e : t.at("exp")) term.exp.push_back(e.get<int>());
            if (static_cast<int>(term.exp.size()) != dim)
                fail(ErrorCode::invalid_config, "monomial exponent length != domain dimension");
            terms.push_back(std::move(term));
        }
        table.per_coordinate.push_back(std::move(terms));
    }
    if (static_cast<int>(table.per_coordinate.size()) != dim)
        fail(ErrorCode::invalid_config, "field component count != domain dimension");
    return [table](const Vec& x) { return table.eval(x); };
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    if (j.contains("example")) {
        std::string name = j.at("example").get<std::string>();
        int n = j.value("n", 4);
        GroupKind kind = parse_group_kind(j.value("group", std::string("circle")));
        Scenario sc = make_scenario(name, n, kind);
        if (j.contains("budgets")) {
            const auto& b = j.at("budgets");
            sc.default_K = b.value("K", sc.default_K);
            sc.default_B = b.value("B", sc.default_B);
            sc.default_grid = b.value("grid", sc.default_grid);
            sc.default_samples = b.value("samples", sc.default_samples);
        }
        return sc;
    }

    Scenario sc;
    sc.name = j.value("name", std::string("inline"));
    sc.n = j.value("n", 0);
    const auto& dj = j.at("domain");
    int dim = dj.at("dimension").get<int>();
    RegionPtr container = region_from_json(dj.at("container"), dim);
    std::vector<RegionPtr> removed;
    if (dj.contains("remove"))
        for (const auto& r : dj.at("remove")) removed.push_back(region_from_json(r, dim));
    ChartDomain domain(dim, sc.name, container, std::move(removed));

    std::vector<VectorField> fields;
    for (const auto& f : j.at("fields")) fields.push_back(field_from_json(f, dim, sc.n));

    StructureConstants c(static_cast<int>(fields.size()));
    if (j.contains("structure_constants"))
        for (const auto& e : j.at("structure_constants"))
            c.set(e.at("k").get<int>(), e.at("i").get<int>(), e.at("j").get<int>(),
                  e.at("value").get<double>());

    sc.algebra = VectorFieldAlgebra(domain, std::move(fields), c);

    const auto& gj = j.at("group");
    int k = gj.at("k").get<int>();
    std::vector<Vec> gens;
    if (gj.contains("lattice_generators"))
        for (const auto& g : gj.at("lattice_generators")) gens.push_back(vec_from_json(g));
    sc.group = GroupSpec(k, gens);
    sc.group_kind = gens.empty() ? GroupKind::line : GroupKind::circle;

    if (j.contains("budgets")) {
        const auto& b = j.at("budgets");
        sc.default_K = b.value("K", 8);
        sc.default_B = b.value("B", 10.0);
        sc.default_grid = b.value("grid", 8);
        sc.default_samples = b.value("samples", 50);
    }
    if (j.contains("sample_box")) {
        sc.sample_box_halfwidth = vec_from_json(j.at("sample_box"));
    } else {
        sc.sample_box_halfwidth = Vec(dim);
        for (int i = 0; i < dim; ++i) sc.sample_box_halfwidth[i] = 2.0;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::invalid_config, "cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_config, std::string("scenario JSON parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

json scenario_summary(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    if (sc.n > 0) j["n"] = sc.n;
    j["group"] = sc.group_kind == GroupKind::circle ? "circle" : "line";
    j["group_dim"] = sc.group.dim();
    j["domain"] = sc.algebra.domain().label();
    j["algebra_dim"] = sc.algebra.algebra_dim();
    return j;
}

}  // namespace leafspace
