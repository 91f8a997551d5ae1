#pragma once

// JSON file formats for frame systems, Gaussian models and kernel matrices.
//
//   frame file:  {"grid": {"points": [..], "weights": [..]}, "vectors": [[..], ..]}
//   model file:  {"atoms": [{"u": .., "mass": ..}, ..], "frame": [[..], ..],
//                 "phat": {"re": [..], "im": [..]}            (or)
//                 "phi_x": {"grid": {"points", "weights"}, "values": [..]}}
//   kernel file: {"grid": {..}, "kind": "rkhs" | "naive", "rank_tol": .., "matrix": [[..], ..]}
//
// Numbers are written in the shortest decimal form that reads back to the same double.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "framekernel/gp_kl.hpp"
#include "framekernel/rkhs.hpp"

namespace framekernel::io {

using json = nlohmann::json;

/// Malformed document: unparsable text, missing or mistyped fields, inconsistent lengths.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file that cannot be opened.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& field, const std::string& what) {
    throw SchemaError("field '" + field + "': " + what);
}

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
        schema_fail(path.empty() ? std::string("<root>") : path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        schema_fail(path.empty() ? key : path + "." + key, "missing");
    }
    return *it;
}

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        schema_fail(path, "expected a number");
    }
    return v.get<double>();
}

inline std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) {
        schema_fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline Matrix number_table(const json& v, const std::string& path, std::optional<Index> expected_cols) {
    if (!v.is_array() || v.empty()) {
        schema_fail(path, "expected a non-empty array of rows");
    }
    const auto rows = static_cast<Index>(v.size());
    Index cols = -1;
    Matrix m;
    for (Index r = 0; r < rows; ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        const std::vector<double> row = number_array(v[static_cast<std::size_t>(r)], row_path);
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            if (expected_cols && cols != *expected_cols) {
                schema_fail(row_path, "expected " + std::to_string(*expected_cols) + " entries, found " +
                                          std::to_string(cols));
            }
            m.resize(rows, cols);
        } else if (static_cast<Index>(row.size()) != cols) {
            schema_fail(row_path, "row length " + std::to_string(row.size()) + " differs from " +
                                      std::to_string(cols) + " (table must be rectangular)");
        }
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = row[static_cast<std::size_t>(c)];
        }
    }
    return m;
}

// Wraps library validation failures (non-positive weights, duplicate points, ...) as
// schema errors naming the offending field.
template <typename Fn>
auto validated(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        schema_fail(path, e.what());
    }
}

}  // namespace detail

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

inline void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FileError("cannot write '" + path + "'");
    }
    out << doc.dump(2) << '\n';
    if (!out) {
        throw FileError("write to '" + path + "' failed");
    }
}

inline json to_json(const Grid& grid) { return json{{"points", grid.points()}, {"weights", grid.weights()}}; }

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

inline Grid grid_from_json(const json& v, const std::string& path) {
    const std::vector<double> points = detail::number_array(detail::member(v, "points", path), detail::join(path, "points"));
    const std::vector<double> weights =
        detail::number_array(detail::member(v, "weights", path), detail::join(path, "weights"));
    if (points.empty()) {
        detail::schema_fail(detail::join(path, "points"), "grid needs at least one point");
    }
    if (weights.size() != points.size()) {
        detail::schema_fail(detail::join(path, "weights"), "expected " + std::to_string(points.size()) +
                                                               " entries to match points, found " +
                                                               std::to_string(weights.size()));
    }
    return detail::validated(path, [&] { return Grid(points, weights); });
}

inline json frame_to_json(const FrameSystem& fs) {
    return json{{"grid", to_json(fs.grid())}, {"vectors", to_json(fs.vectors())}};
}

inline FrameSystem frame_from_json(const json& doc) {
    Grid grid = grid_from_json(detail::member(doc, "grid", ""), "grid");
    Matrix vectors = detail::number_table(detail::member(doc, "vectors", ""), "vectors", grid.size());
    return detail::validated("vectors", [&] { return FrameSystem(std::move(grid), std::move(vectors)); });
}

inline FrameSystem read_frame_file(const std::string& path) { return frame_from_json(read_json_file(path)); }

enum class KernelKind { Rkhs, Naive };

inline const char* to_string(KernelKind kind) { return kind == KernelKind::Rkhs ? "rkhs" : "naive"; }

struct KernelDocument {
    KernelMatrix kernel;
    KernelKind kind = KernelKind::Rkhs;
    double rank_tol = kDefaultRankTol;
};

inline json kernel_to_json(const KernelDocument& doc) {
    return json{{"grid", to_json(doc.kernel.grid)},
                {"kind", to_string(doc.kind)},
                {"rank_tol", doc.rank_tol},
                {"matrix", to_json(doc.kernel.values)}};
}

inline KernelDocument kernel_from_json(const json& doc) {
    Grid grid = grid_from_json(detail::member(doc, "grid", ""), "grid");
    const json& kind = detail::member(doc, "kind", "");
    if (!kind.is_string() || (kind != "rkhs" && kind != "naive")) {
        detail::schema_fail("kind", "expected \"rkhs\" or \"naive\"");
    }
    const double rank_tol = detail::number(detail::member(doc, "rank_tol", ""), "rank_tol");
    Matrix m = detail::number_table(detail::member(doc, "matrix", ""), "matrix", grid.size());
    if (m.rows() != grid.size()) {
        detail::schema_fail("matrix", "expected " + std::to_string(grid.size()) + " rows");
    }
    return KernelDocument{KernelMatrix{std::move(grid), std::move(m)},
                          kind == "rkhs" ? KernelKind::Rkhs : KernelKind::Naive, rank_tol};
}

/// Frame-file layout for a canonical tight frame, tagged with how it was produced.
inline json canonical_to_json(const CanonicalTightFrame& ctf, double rank_tol) {
    return json{{"grid", to_json(ctf.grid)},
                {"kind", "canonical_tight"},
                {"rank_tol", rank_tol},
                {"vectors", to_json(ctf.vectors)}};
}

struct PhiSamples {
    Grid grid;
    Vector values;
};

struct ModelDocument {
    SigmaFrame frame;
    std::optional<ComplexVector> phat;
    std::optional<PhiSamples> phi_x;

    /// phat as given, or the Fourier transform of phi_x at the atoms.
    [[nodiscard]] ComplexVector resolve_phat() const {
        if (phat) {
            return *phat;
        }
        return fourier_at_atoms(phi_x->grid, phi_x->values, frame.measure());
    }
};

inline json model_to_json(const ModelDocument& doc) {
    json atoms = json::array();
    for (const Atom& a : doc.frame.measure().atoms()) {
        atoms.push_back(json{{"u", a.u}, {"mass", a.mass}});
    }
    json out{{"atoms", std::move(atoms)}, {"frame", to_json(doc.frame.vectors())}};
    if (doc.phat) {
        out["phat"] = json{{"re", to_json(doc.phat->re)}, {"im", to_json(doc.phat->im)}};
    }
    if (doc.phi_x) {
        out["phi_x"] = json{{"grid", to_json(doc.phi_x->grid)}, {"values", to_json(doc.phi_x->values)}};
    }
    return out;
}

/// Requires exactly one of "phat" / "phi_x".
inline ModelDocument model_from_json(const json& doc) {
    const json& atoms_json = detail::member(doc, "atoms", "");
    if (!atoms_json.is_array() || atoms_json.empty()) {
        detail::schema_fail("atoms", "expected a non-empty array of {u, mass}");
    }
    std::vector<Atom> atoms;
    for (std::size_t j = 0; j < atoms_json.size(); ++j) {
        const std::string path = "atoms[" + std::to_string(j) + "]";
        atoms.push_back(Atom{detail::number(detail::member(atoms_json[j], "u", path), path + ".u"),
                             detail::number(detail::member(atoms_json[j], "mass", path), path + ".mass")});
    }
    AtomicMeasure measure = detail::validated("atoms", [&] { return AtomicMeasure(atoms); });
    const auto j_count = measure.size();
    Matrix vectors = detail::number_table(detail::member(doc, "frame", ""), "frame", j_count);
    SigmaFrame frame = detail::validated("frame", [&] { return SigmaFrame(std::move(measure), std::move(vectors)); });

    const bool has_phat = doc.contains("phat");
    const bool has_phi_x = doc.contains("phi_x");
    if (has_phat == has_phi_x) {
        detail::schema_fail("phat", "exactly one of \"phat\" and \"phi_x\" must be present");
    }
    ModelDocument out{std::move(frame), std::nullopt, std::nullopt};
    if (has_phat) {
        const json& p = doc["phat"];
        std::vector<double> re = detail::number_array(detail::member(p, "re", "phat"), "phat.re");
        std::vector<double> im = detail::number_array(detail::member(p, "im", "phat"), "phat.im");
        for (const auto& [name, arr] : {std::pair{"phat.re", &re}, std::pair{"phat.im", &im}}) {
            if (static_cast<Index>(arr->size()) != j_count) {
                detail::schema_fail(name, "expected " + std::to_string(j_count) + " entries (one per atom), found " +
                                              std::to_string(arr->size()));
            }
        }
        out.phat = ComplexVector{Eigen::Map<Vector>(re.data(), j_count), Eigen::Map<Vector>(im.data(), j_count)};
    } else {
        const json& p = doc["phi_x"];
        Grid grid = grid_from_json(detail::member(p, "grid", "phi_x"), "phi_x.grid");
        std::vector<double> values = detail::number_array(detail::member(p, "values", "phi_x"), "phi_x.values");
        if (static_cast<Index>(values.size()) != grid.size()) {
            detail::schema_fail("phi_x.values", "expected " + std::to_string(grid.size()) + " entries to match grid");
        }
        Vector v = Eigen::Map<Vector>(values.data(), grid.size());
        out.phi_x = PhiSamples{std::move(grid), std::move(v)};
    }
    return out;
}

inline ModelDocument read_model_file(const std::string& path) { return model_from_json(read_json_file(path)); }

}  // namespace framekernel::io
