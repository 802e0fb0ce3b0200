#include "kcn/definition.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace kcn {

namespace {

std::vector<std::string> tokenize_head(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Split `g 1 2 = "expr"` style component lines.
struct ComponentLine {
    std::string kind;
    int i = 0, j = 0;
    std::string expr;
};

bool parse_component_line(const std::string& line, ComponentLine& out, std::string& err) {
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    if (kind != "g" && kind != "J" && kind != "theta" && kind != "A") return false;
    int i = 0, j = 0;
    char eq = 0;
    if (!(in >> i >> j >> eq) || eq != '=') {
        err = "component line must look like `" + kind + " <i> <j> = \"<expr>\"`";
        out.kind = kind;
        out.i = -1;
        return true;
    }
    std::string rest;
    std::getline(in, rest);
    auto first = rest.find('"');
    auto last = rest.rfind('"');
    if (first == std::string::npos || last == first) {
        err = "expression must be double-quoted";
        out.kind = kind;
        out.i = -1;
        return true;
    }
    out.kind = kind;
    out.i = i;
    out.j = j;
    out.expr = rest.substr(first + 1, last - first - 1);
    return true;
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        if (line[k] == '"') quoted = !quoted;
        if (line[k] == '#' && !quoted) return line.substr(0, k);
    }
    return line;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace

ChartDefinition load_definition_text(const std::string& text) {
    ChartDefinition def;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_dim = false, have_coords = false;
    std::vector<std::tuple<int, ComponentLine>> components;
    std::map<int, std::pair<double, double>> domains;

    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = strip_comment(raw);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        ComponentLine comp;
        std::string err;
        if (parse_component_line(line, comp, err)) {
            if (!err.empty()) throw DefinitionError(err, lineno);
            components.emplace_back(lineno, comp);
            continue;
        }

        auto toks = tokenize_head(line);
        const std::string& head = toks[0];
        if (head == "manifold") {
            if (toks.size() != 2) throw DefinitionError("manifold expects one name", lineno);
            def.name = toks[1];
        } else if (head == "dim") {
            if (toks.size() != 2) throw DefinitionError("dim expects one integer", lineno);
            def.dim = std::atoi(toks[1].c_str());
            if (def.dim < 2 || def.dim > 16)
                throw DefinitionError("dimension must be between 2 and 16", lineno);
            if (def.dim % 2 != 0) throw DefinitionError("dimension must be even", lineno);
            have_dim = true;
        } else if (head == "coords") {
            if (!have_dim) throw DefinitionError("coords must come after dim", lineno);
            if (static_cast<int>(toks.size()) - 1 != def.dim)
                throw DefinitionError("coords expects exactly dim identifiers", lineno);
            def.coords.assign(toks.begin() + 1, toks.end());
            for (const auto& c : def.coords)
                if (!is_identifier(c))
                    throw DefinitionError("coordinate name `" + c + "` is not an identifier",
                                          lineno);
            for (std::size_t a = 0; a < def.coords.size(); ++a)
                for (std::size_t b = a + 1; b < def.coords.size(); ++b)
                    if (def.coords[a] == def.coords[b])
                        throw DefinitionError("duplicate coordinate name `" + def.coords[a] + "`",
                                              lineno);
            have_coords = true;
        } else if (head == "domain") {
            if (toks.size() != 4) throw DefinitionError("domain expects `<i> <lo> <hi>`", lineno);
            int i = std::atoi(toks[1].c_str());
            if (!have_dim || i < 1 || i > def.dim)
                throw DefinitionError("domain index out of range", lineno);
            double lo = std::strtod(toks[2].c_str(), nullptr);
            double hi = std::strtod(toks[3].c_str(), nullptr);
            if (!(lo < hi)) throw DefinitionError("domain requires lo < hi", lineno);
            domains[i - 1] = {lo, hi};
        } else if (head == "exclude") {
            auto first = line.find('"');
            auto last = line.rfind('"');
            if (first == std::string::npos || last == first)
                throw DefinitionError("exclude expects a double-quoted expression", lineno);
            def.exclusion_source = line.substr(first + 1, last - first - 1);
        } else {
            throw DefinitionError("unknown directive `" + head + "`", lineno);
        }
    }

    if (!have_dim) throw DefinitionError("missing `dim` line");
    if (!have_coords) throw DefinitionError("missing `coords` line");
    if (def.name.empty()) throw DefinitionError("missing `manifold` line");

    def.domain.assign(def.dim, {-1.0, 1.0});
    for (const auto& [i, box] : domains) def.domain[i] = box;

    for (const auto& [lineno_c, comp] : components) {
        if (comp.i < 1 || comp.i > def.dim || comp.j < 1 || comp.j > def.dim)
            throw DefinitionError(comp.kind + " indices out of range", lineno_c);
        const int i = comp.i, j = comp.j;
        if (comp.kind == "g" && i > j)
            throw DefinitionError("g indices must satisfy i <= j", lineno_c);
        if (comp.kind == "theta" && i >= j)
            throw DefinitionError("theta indices must satisfy i < j", lineno_c);
        auto& table = comp.kind == "g"       ? def.g_sources
                      : comp.kind == "J"     ? def.j_sources
                      : comp.kind == "theta" ? def.theta_sources
                                             : def.a_sources;
        auto key = std::make_pair(i - 1, j - 1);
        if (table.count(key))
            throw DefinitionError("duplicate " + comp.kind + " component", lineno_c);
        try {
            (void)Expression::parse(comp.expr, def.coords);
        } catch (const ParseError& e) {
            throw DefinitionError(comp.kind + " expression: " + e.what(), lineno_c);
        }
        table[key] = comp.expr;
    }

    if (def.g_sources.empty()) throw DefinitionError("no g components given");
    if (def.j_sources.empty()) throw DefinitionError("no J components given");

    if (def.exclusion_source) {
        try {
            def.exclusion = Expression::parse(*def.exclusion_source, def.coords);
        } catch (const ParseError& e) {
            throw DefinitionError(std::string("exclude expression: ") + e.what());
        }
    }
    return def;
}

ChartDefinition load_definition_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DefinitionError("cannot open `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_definition_text(buf.str());
}

KahlerChart ChartDefinition::to_chart() const {
    KahlerChart chart;
    chart.dim = dim;
    chart.coords = coords;
    chart.g_exprs = ExprGrid(dim);
    chart.j_exprs = ExprGrid(dim);
    for (const auto& [ij, src] : g_sources) {
        Expression e = Expression::parse(src, coords);
        chart.g_exprs.at(ij.first, ij.second) = e;
        chart.g_exprs.at(ij.second, ij.first) = e;  // symmetric by construction
    }
    for (const auto& [ij, src] : j_sources)
        chart.j_exprs.at(ij.first, ij.second) = Expression::parse(src, coords);
    return chart;
}

StructureCandidate ChartDefinition::to_candidate() const {
    if (!has_candidate()) throw DefinitionError("definition has no candidate (theta or A)");
    ExprGrid theta(dim), a(dim);
    for (const auto& [ij, src] : theta_sources) {
        Expression e = Expression::parse(src, coords);
        theta.at(ij.first, ij.second) = e;
        theta.at(ij.second, ij.first) =
            Expression::parse("-(" + src + ")", coords);  // antisymmetric completion
    }
    for (const auto& [ij, src] : a_sources)
        a.at(ij.first, ij.second) = Expression::parse(src, coords);

    if (!theta_sources.empty() && !a_sources.empty())
        return StructureCandidate::from_both(std::move(theta), std::move(a));
    if (!theta_sources.empty()) return StructureCandidate::from_theta(std::move(theta));
    return StructureCandidate::from_a(std::move(a));
}

bool ChartDefinition::structurally_equal(const ChartDefinition& other) const {
    if (name != other.name || dim != other.dim || coords != other.coords ||
        domain != other.domain)
        return false;
    auto grids_equal = [&](const std::map<std::pair<int, int>, std::string>& a,
                           const std::map<std::pair<int, int>, std::string>& b) {
        if (a.size() != b.size()) return false;
        for (const auto& [ij, src] : a) {
            auto it = b.find(ij);
            if (it == b.end()) return false;
            if (!Expression::parse(src, coords)
                     .structurally_equal(Expression::parse(it->second, other.coords)))
                return false;
        }
        return true;
    };
    if (!grids_equal(g_sources, other.g_sources)) return false;
    if (!grids_equal(j_sources, other.j_sources)) return false;
    if (!grids_equal(theta_sources, other.theta_sources)) return false;
    if (!grids_equal(a_sources, other.a_sources)) return false;
    if (exclusion_source.has_value() != other.exclusion_source.has_value()) return false;
    if (exclusion_source &&
        !Expression::parse(*exclusion_source, coords)
             .structurally_equal(Expression::parse(*other.exclusion_source, other.coords)))
        return false;
    return true;
}

std::string serialize_definition(const ChartDefinition& def) {
    std::ostringstream out;
    out << "manifold " << def.name << "\n";
    out << "dim " << def.dim << "\n";
    out << "coords";
    for (const auto& c : def.coords) out << " " << c;
    out << "\n";
    for (int i = 0; i < def.dim; ++i) {
        char lo[40], hi[40];
        std::snprintf(lo, sizeof lo, "%.17g", def.domain[i].first);
        std::snprintf(hi, sizeof hi, "%.17g", def.domain[i].second);
        out << "domain " << (i + 1) << " " << lo << " " << hi << "\n";
    }
    if (def.exclusion_source) out << "exclude \"" << *def.exclusion_source << "\"\n";
    auto emit = [&](const char* kind, const std::map<std::pair<int, int>, std::string>& table) {
        for (const auto& [ij, src] : table)
            out << kind << " " << (ij.first + 1) << " " << (ij.second + 1) << " = \"" << src
                << "\"\n";
    };
    emit("g", def.g_sources);
    emit("J", def.j_sources);
    emit("theta", def.theta_sources);
    emit("A", def.a_sources);
    return out.str();
}

}  // namespace kcn
