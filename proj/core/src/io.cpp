#include "polycorr/io.hpp"
#include "polycorr/errors.hpp"

#include <json.hpp>

#include <limits>

namespace polycorr {

namespace {

using nlohmann::json;

json parse_checked(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw schema_error("invalid JSON");
    return j;
}

Int get_coord(const json& v) {
    if (!v.is_number_integer()) throw schema_error("coordinate must be an integer");
    const auto raw = v.get<long long>();
    if (raw < -1000000 || raw > 1000000)
        throw schema_error("coordinate out of supported range");
    return raw;
}

} // namespace

int json_input_dim(const std::string& text) {
    json j = parse_checked(text);
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
        throw schema_error("input must be an object with integer \"dim\"");
    return j["dim"].get<int>();
}

LatticePolygon parse_polygon_json(const std::string& text) {
    json j = parse_checked(text);
    if (!j.is_object()) throw schema_error("polygon input must be an object");
    if (!j.contains("dim") || j["dim"] != 2)
        throw schema_error("polygon input needs \"dim\": 2");
    if (!j.contains("boundary") || !j["boundary"].is_array())
        throw schema_error("polygon input needs a \"boundary\" array");
    std::vector<Pt> boundary;
    for (const json& pt : j["boundary"]) {
        if (!pt.is_array() || pt.size() != 2)
            throw schema_error("boundary points must be [x, y] pairs");
        boundary.push_back({get_coord(pt[0]), get_coord(pt[1])});
    }
    bool allow_collinear = true;
    if (j.contains("strict_corners")) {
        if (!j["strict_corners"].is_boolean())
            throw schema_error("\"strict_corners\" must be boolean");
        allow_collinear = !j["strict_corners"].get<bool>();
    }
    return LatticePolygon::from_boundary(std::move(boundary), allow_collinear);
}

SimplicialPolytope parse_polytope_json(const std::string& text) {
    json j = parse_checked(text);
    if (!j.is_object()) throw schema_error("polytope input must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw schema_error("polytope input needs integer \"dim\"");
    const int d = j["dim"].get<int>();
    if (d < 3 || d > 4) throw schema_error("polytope \"dim\" must be 3 or 4");
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw schema_error("polytope input needs a \"vertices\" array");
    if (!j.contains("facets") || !j["facets"].is_array())
        throw schema_error("polytope input needs a \"facets\" array");

    std::vector<PtD> vertices;
    for (const json& v : j["vertices"]) {
        if (!v.is_array() || static_cast<int>(v.size()) != d)
            throw schema_error("polytope vertices must have dim coordinates");
        PtD p;
        for (const json& c : v) p.push_back(get_coord(c));
        vertices.push_back(std::move(p));
    }
    std::vector<std::vector<int>> facets;
    for (const json& f : j["facets"]) {
        if (!f.is_array()) throw schema_error("facets must be index arrays");
        std::vector<int> facet;
        for (const json& idx : f) {
            if (!idx.is_number_integer()) throw schema_error("facet index must be integer");
            facet.push_back(idx.get<int>());
        }
        facets.push_back(std::move(facet));
    }
    return make_simplicial_polytope(d, std::move(vertices), std::move(facets));
}

std::string polygon_to_json(const LatticePolygon& poly) {
    json arr = json::array();
    for (Pt p : poly.boundary()) arr.push_back({p.x, p.y});
    json j;
    j["dim"] = 2;
    j["boundary"] = std::move(arr);
    return j.dump();
}

std::string polytope_to_json(const SimplicialPolytope& poly) {
    json verts = json::array();
    for (const PtD& v : poly.vertices) verts.push_back(v);
    json facets = json::array();
    for (const std::vector<int>& f : poly.facets) facets.push_back(f);
    json j;
    j["dim"] = poly.d;
    j["vertices"] = std::move(verts);
    j["facets"] = std::move(facets);
    return j.dump();
}

std::string triangulations_to_json(const std::vector<Triangulation>& ts) {
    json arr = json::array();
    for (const auto& t : ts) {
        json tris = json::array();
        for (const auto& tri : t.triangles) {
            json cell = json::array();
            for (const Pt& p : tri) cell.push_back({p.x, p.y});
            tris.push_back(std::move(cell));
        }
        arr.push_back(json{{"triangles", std::move(tris)}});
    }
    return arr.dump();
}

std::string subdivisions_to_json(const std::vector<Subdivision>& ss) {
    json arr = json::array();
    for (const auto& s : ss) {
        json cells = json::array();
        for (const auto& c : s.cells) {
            json cell = json::array();
            for (const Pt& p : c) cell.push_back({p.x, p.y});
            cells.push_back(std::move(cell));
        }
        arr.push_back(json{{"cells", std::move(cells)}});
    }
    return arr.dump();
}

std::string genpoly_to_json(const GenPoly& p) {
    json arr = json::array();
    for (const auto& [e, c] : p.terms()) {
        json term;
        term["coeff"] = c;
        term["beta"] = e.beta;
        term["mu"] = e.mu;
        if (e.npow != 0) term["N"] = e.npow;
        json t = json::object();
        for (const auto& [q, k] : e.t) t[std::to_string(q)] = k;
        term["t"] = std::move(t);
        json x = json::object();
        for (const auto& [pt, k] : e.x)
            x[std::to_string(pt.x) + "," + std::to_string(pt.y)] = k;
        term["x"] = std::move(x);
        if (!e.ttree.empty()) {
            json tt = json::object();
            for (const auto& [code, k] : e.ttree) tt[code] = k;
            term["t_tree"] = std::move(tt);
        }
        arr.push_back(std::move(term));
    }
    return arr.dump();
}

} // namespace polycorr
