#include "entkit/state_io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "entkit/errors.hpp"

namespace entkit {

namespace {

using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_entry(cdouble z) {
    return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

struct Field {
    std::string text;
    std::size_t line = 0;  // 1-based line of the key
};

// `key: value` entries where the value may continue over following lines
// until the next key. Values are JSON literals or arrays.
std::map<std::string, Field> parse_fields(std::istream& in) {
    std::map<std::string, Field> fields;
    std::string line;
    std::string current_key;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::size_t key_end = start;
        while (key_end < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[key_end])) || line[key_end] == '_'))
            ++key_end;
        const bool is_key = key_end > start && key_end < line.size() && line[key_end] == ':';
        if (is_key) {
            current_key = line.substr(start, key_end - start);
            if (fields.count(current_key))
                throw ParseError("duplicate field '" + current_key + "'", line_no, start + 1);
            fields[current_key] = Field{line.substr(key_end + 1), line_no};
        } else {
            if (current_key.empty())
                throw ParseError("content before the first field", line_no, start + 1);
            fields[current_key].text += "\n" + line;
        }
    }
    return fields;
}

json parse_value(const std::map<std::string, Field>& fields, const std::string& key) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("missing field '" + key + "'", 1, 1);
    try {
        return json::parse(it->second.text);
    } catch (const json::parse_error& err) {
        // Byte offset within the value text; map to line/column.
        std::size_t line = it->second.line;
        std::size_t column = 1;
        for (std::size_t k = 0; k < std::min(err.byte, it->second.text.size()); ++k) {
            if (it->second.text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("invalid value for '" + key + "': " + err.what(), line, column);
    }
}

cdouble entry_from_json(const json& j, const std::string& key, std::size_t line) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("matrix entries must be [re, im] pairs in '" + key + "'", line, 1);
    return cdouble(j[0].get<double>(), j[1].get<double>());
}

ComplexMatrix matrix_from_json(const json& j, const std::string& key, std::size_t line,
                               std::size_t expected) {
    if (!j.is_array() || j.size() != expected)
        throw ParseError("field '" + key + "' must hold " + std::to_string(expected) + " rows",
                         line, 1);
    ComplexMatrix m(expected, expected);
    for (std::size_t r = 0; r < expected; ++r) {
        if (!j[r].is_array() || j[r].size() != expected)
            throw ParseError("row " + std::to_string(r) + " of '" + key + "' has wrong length",
                             line, 1);
        for (std::size_t c = 0; c < expected; ++c) m(r, c) = entry_from_json(j[r][c], key, line);
    }
    return m;
}

void write_matrix(std::ostream& out, const std::string& key, const ComplexMatrix& m) {
    out << key << ": [";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << (r == 0 ? "[" : "       [");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << format_entry(m(r, c));
            if (c + 1 < m.cols()) out << ", ";
        }
        out << "]";
        if (r + 1 < m.rows()) out << ",\n";
    }
    out << "]\n";
}

CVector vector_from_json(const json& j, const std::string& key, std::size_t line) {
    if (!j.is_array()) throw ParseError("'" + key + "' must be an array", line, 1);
    CVector v;
    for (const auto& entry : j) v.push_back(entry_from_json(entry, key, line));
    return v;
}

std::string vector_to_text(const CVector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += format_entry(v[i]);
        if (i + 1 < v.size()) out += ", ";
    }
    return out + "]";
}

}  // namespace

void save_density(std::ostream& out, const DensityMatrix& rho) {
    out << "dims: [" << rho.dims().m << ", " << rho.dims().n << "]\n";
    write_matrix(out, "matrix", rho.matrix());
}

void save_density_file(const std::string& path, const DensityMatrix& rho) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_density(out, rho);
}

DensityMatrix load_density(std::istream& in) {
    const auto fields = parse_fields(in);
    const json dims_json = parse_value(fields, "dims");
    if (!dims_json.is_array() || dims_json.size() != 2)
        throw ParseError("'dims' must be [M, N]", fields.at("dims").line, 1);
    const Dims dims{dims_json[0].get<std::size_t>(), dims_json[1].get<std::size_t>()};
    const ComplexMatrix m = matrix_from_json(parse_value(fields, "matrix"), "matrix",
                                             fields.at("matrix").line, dims.total());
    return DensityMatrix(dims, m);
}

DensityMatrix load_density_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_density(in);
}

void save_witness(std::ostream& out, const Witness& w,
                  const std::optional<PseudoMixture>& mixture) {
    out << "dims: [" << w.dims.m << ", " << w.dims.n << "]\n";
    write_matrix(out, "matrix", w.op);
    out << "sep_floor: " << format_double(w.sep_floor) << "\n";
    out << "search_restarts: " << w.search_restarts << "\n";
    if (w.detected_value)
        out << "detected_value: " << format_double(*w.detected_value) << "\n";
    if (mixture) {
        out << "pseudo_mixture: [";
        for (std::size_t i = 0; i < mixture->terms.size(); ++i) {
            const auto& t = mixture->terms[i];
            out << (i == 0 ? "[" : "                 [") << format_double(t.c) << ", "
                << vector_to_text(t.a) << ", " << vector_to_text(t.b) << "]";
            if (i + 1 < mixture->terms.size()) out << ",\n";
        }
        out << "]\n";
    }
}

LoadedWitness load_witness(std::istream& in) {
    const auto fields = parse_fields(in);
    const json dims_json = parse_value(fields, "dims");
    if (!dims_json.is_array() || dims_json.size() != 2)
        throw ParseError("'dims' must be [M, N]", fields.at("dims").line, 1);
    LoadedWitness out;
    out.witness.dims = Dims{dims_json[0].get<std::size_t>(), dims_json[1].get<std::size_t>()};
    out.witness.op = matrix_from_json(parse_value(fields, "matrix"), "matrix",
                                      fields.at("matrix").line, out.witness.dims.total());
    out.witness.sep_floor = parse_value(fields, "sep_floor").get<double>();
    if (fields.count("search_restarts"))
        out.witness.search_restarts = parse_value(fields, "search_restarts").get<std::size_t>();
    if (fields.count("detected_value"))
        out.witness.detected_value = parse_value(fields, "detected_value").get<double>();
    if (fields.count("pseudo_mixture")) {
        const json mixture = parse_value(fields, "pseudo_mixture");
        const std::size_t line = fields.at("pseudo_mixture").line;
        PseudoMixture pm;
        for (const auto& term : mixture) {
            if (!term.is_array() || term.size() != 3)
                throw ParseError("pseudo_mixture terms must be [c, a, b]", line, 1);
            PseudoMixtureTerm t;
            t.c = term[0].get<double>();
            t.a = vector_from_json(term[1], "pseudo_mixture", line);
            t.b = vector_from_json(term[2], "pseudo_mixture", line);
            pm.terms.push_back(std::move(t));
        }
        out.mixture = std::move(pm);
    }
    return out;
}

void save_identical(std::ostream& out, ParticleKind kind, const ComplexMatrix& coefficients) {
    const std::size_t n = coefficients.rows();
    out << "n_modes: " << n << "\n";
    out << "kind: \"" << (kind == ParticleKind::Fermion ? "fermion" : "boson") << "\"\n";
    out << "upper_triangle: [";
    bool first = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (kind == ParticleKind::Fermion ? i + 1 : i); j < n; ++j) {
            if (!first) out << ", ";
            out << format_entry(coefficients(i, j));
            first = false;
        }
    out << "]\n";
}

void save_identical_file(const std::string& path, ParticleKind kind,
                         const ComplexMatrix& coefficients) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_identical(out, kind, coefficients);
}

LoadedIdentical load_identical(std::istream& in) {
    const auto fields = parse_fields(in);
    LoadedIdentical out;
    out.n_modes = parse_value(fields, "n_modes").get<std::size_t>();
    if (fields.count("kind")) {
        const std::string kind = parse_value(fields, "kind").get<std::string>();
        if (kind == "fermion")
            out.kind = ParticleKind::Fermion;
        else if (kind == "boson")
            out.kind = ParticleKind::Boson;
        else
            throw ParseError("kind must be \"fermion\" or \"boson\"", fields.at("kind").line, 1);
    }
    const json upper = parse_value(fields, "upper_triangle");
    const std::size_t line = fields.at("upper_triangle").line;
    const std::size_t n = out.n_modes;
    const std::size_t expected =
        out.kind == ParticleKind::Fermion ? n * (n - 1) / 2 : n * (n + 1) / 2;
    if (!upper.is_array() || upper.size() != expected)
        throw ParseError("'upper_triangle' must hold " + std::to_string(expected) + " entries",
                         line, 1);
    out.coefficients = ComplexMatrix(n, n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (out.kind == ParticleKind::Fermion ? i + 1 : i); j < n; ++j) {
            const cdouble x = entry_from_json(upper[idx++], "upper_triangle", line);
            out.coefficients(i, j) = x;
            if (out.kind == ParticleKind::Fermion) {
                out.coefficients(j, i) = -x;
            } else {
                out.coefficients(j, i) = x;
            }
        }
    return out;
}

LoadedIdentical load_identical_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_identical(in);
}

std::string content_digest(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
    return buf;
}

}  // namespace entkit
