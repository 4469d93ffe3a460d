#include "gridcarbon/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "gridcarbon/format.hpp"

namespace gridcarbon {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Case-file lexer: identifiers (dots allowed, so `mpc.bus` is one token),
// numbers, single-quoted strings, punctuation, newlines. `%` starts a
// comment running to end of line.
// ---------------------------------------------------------------------------

struct Token {
    enum Kind { Ident, Number, Str, Punct, Newline, End };
    Kind kind = End;
    std::string text;
    double number = 0.0;
    int line = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_blanks_and_comments();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size()) {
            tok.kind = Token::End;
            return tok;
        }
        char c = text_[pos_];
        if (c == '\n') {
            advance();
            tok.kind = Token::Newline;
            tok.text = "\n";
            return tok;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    advance();
                } else {
                    break;
                }
            }
            tok.kind = Token::Ident;
            tok.text = text_.substr(start, pos_ - start);
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
            return lex_number(tok);
        }
        if (c == '\'') {
            advance();
            std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '\'' && text_[pos_] != '\n') advance();
            if (pos_ >= text_.size() || text_[pos_] != '\'') {
                throw ParseError("unterminated string literal", tok.line, tok.column);
            }
            tok.kind = Token::Str;
            tok.text = text_.substr(start, pos_ - start);
            advance(); // closing quote
            return tok;
        }
        if (c == '=' || c == '[' || c == ']' || c == ';' || c == ',') {
            advance();
            tok.kind = Token::Punct;
            tok.text = std::string(1, c);
            return tok;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blanks_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == '.' && pos_ + 2 < text_.size() && text_[pos_ + 1] == '.' &&
                       text_[pos_ + 2] == '.') {
                // MATLAB line continuation: swallow through the newline.
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                if (pos_ < text_.size()) advance();
            } else {
                break;
            }
        }
    }

    Token lex_number(Token tok) {
        bool negative = false;
        char c = text_[pos_];
        if (c == '+' || c == '-') {
            negative = (c == '-');
            advance();
            if (pos_ >= text_.size() ||
                (!std::isdigit(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '.')) {
                throw ParseError("dangling sign", tok.line, tok.column);
            }
        }
        std::size_t start = pos_;
        bool seen_digit = false;
        bool seen_dot = false;
        bool seen_exp = false;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(d))) {
                seen_digit = true;
                advance();
            } else if (d == '.' && !seen_dot && !seen_exp) {
                seen_dot = true;
                advance();
            } else if ((d == 'e' || d == 'E') && seen_digit && !seen_exp) {
                seen_exp = true;
                advance();
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
            } else {
                break;
            }
        }
        if (!seen_digit) throw ParseError("malformed number", tok.line, tok.column);
        std::string digits = text_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
            throw ParseError("malformed number '" + digits + "'", tok.line, tok.column);
        }
        tok.kind = Token::Number;
        tok.number = negative ? -value : value;
        tok.text = digits;
        return tok;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

struct Matrix {
    std::vector<std::vector<double>> rows;
    int line = 0; // where the assignment started, for diagnostics
};

struct CaseFile {
    std::map<std::string, double> scalars;
    std::map<std::string, Matrix> matrices;
};

class CaseParser {
public:
    explicit CaseParser(const std::string& text) : lexer_(text) { bump(); }

    CaseFile parse() {
        CaseFile file;
        while (cur_.kind != Token::End) {
            if (cur_.kind == Token::Newline || (cur_.kind == Token::Punct && cur_.text == ";")) {
                bump();
                continue;
            }
            if (cur_.kind == Token::Ident && cur_.text == "function") {
                skip_line();
                continue;
            }
            if (cur_.kind != Token::Ident) {
                throw ParseError("expected assignment, found '" + describe(cur_) + "'", cur_.line,
                                 cur_.column);
            }
            parse_assignment(file);
        }
        return file;
    }

private:
    void bump() { cur_ = lexer_.next(); }

    void skip_line() {
        while (cur_.kind != Token::Newline && cur_.kind != Token::End) bump();
    }

    static std::string describe(const Token& tok) {
        switch (tok.kind) {
        case Token::Newline: return "end of line";
        case Token::End: return "end of file";
        default: return tok.text;
        }
    }

    void expect_punct(const char* p) {
        if (cur_.kind != Token::Punct || cur_.text != p) {
            throw ParseError(std::string("expected '") + p + "', found '" + describe(cur_) + "'",
                             cur_.line, cur_.column);
        }
        bump();
    }

    void parse_assignment(CaseFile& file) {
        std::string name = cur_.text;
        int line = cur_.line;
        bump();
        expect_punct("=");
        skip_newlines();
        if (cur_.kind == Token::Number) {
            double value = cur_.number;
            bump();
            expect_punct(";");
            if (!file.scalars.emplace(name, value).second) {
                throw ParseError("duplicate assignment to " + name, line, 1);
            }
            return;
        }
        if (cur_.kind == Token::Str) {
            bump(); // e.g. mpc.version = '2'; recorded nowhere
            expect_punct(";");
            return;
        }
        if (cur_.kind == Token::Punct && cur_.text == "[") {
            Matrix m = parse_matrix();
            m.line = line;
            if (!file.matrices.emplace(name, std::move(m)).second) {
                throw ParseError("duplicate assignment to " + name, line, 1);
            }
            return;
        }
        throw ParseError("expected number, string, or matrix after '=', found '" + describe(cur_) +
                             "'",
                         cur_.line, cur_.column);
    }

    void skip_newlines() {
        while (cur_.kind == Token::Newline) bump();
    }

    Matrix parse_matrix() {
        expect_punct("[");
        Matrix m;
        std::vector<double> row;
        auto end_row = [&] {
            if (!row.empty()) {
                m.rows.push_back(std::move(row));
                row.clear();
            }
        };
        while (true) {
            if (cur_.kind == Token::Number) {
                row.push_back(cur_.number);
                bump();
            } else if (cur_.kind == Token::Punct && cur_.text == ",") {
                bump();
            } else if (cur_.kind == Token::Punct && cur_.text == ";") {
                end_row();
                bump();
            } else if (cur_.kind == Token::Newline) {
                end_row();
                bump();
            } else if (cur_.kind == Token::Punct && cur_.text == "]") {
                end_row();
                bump();
                break;
            } else {
                throw ParseError("expected matrix element, found '" + describe(cur_) + "'",
                                 cur_.line, cur_.column);
            }
        }
        expect_punct(";");
        for (std::size_t i = 1; i < m.rows.size(); ++i) {
            if (m.rows[i].size() != m.rows[0].size()) {
                throw ParseError("ragged matrix: row " + std::to_string(i + 1) + " has " +
                                     std::to_string(m.rows[i].size()) + " elements, expected " +
                                     std::to_string(m.rows[0].size()),
                                 cur_.line, cur_.column);
            }
        }
        return m;
    }

    Lexer lexer_;
    Token cur_;
};

const Matrix& require_matrix(const CaseFile& file, const std::string& name) {
    auto it = file.matrices.find(name);
    if (it == file.matrices.end()) {
        throw ValidationError("case file is missing required table " + name);
    }
    return it->second;
}

int int_field(double v, const char* what, int line) {
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(v) > 2e9) {
        throw ParseError(std::string(what) + " must be an integer, got " + format_double(v), line,
                         1);
    }
    return static_cast<int>(r);
}

} // namespace

double Generator::segment_slope(int k) const {
    const CostPoint& a = cost_points[static_cast<std::size_t>(k)];
    const CostPoint& b = cost_points[static_cast<std::size_t>(k) + 1];
    return (b.cost - a.cost) / (b.mw - a.mw);
}

double Generator::segment_intercept(int k) const {
    const CostPoint& a = cost_points[static_cast<std::size_t>(k)];
    return a.cost - segment_slope(k) * a.mw;
}

int Network::ref_bus() const {
    for (const Bus& b : buses) {
        if (b.is_ref) return b.id;
    }
    throw ValidationError("network has no reference bus");
}

const Bus* Network::find_bus(int id) const {
    for (const Bus& b : buses) {
        if (b.id == id) return &b;
    }
    return nullptr;
}

const Generator* Network::find_generator(int id) const {
    for (const Generator& g : generators) {
        if (g.id == id) return &g;
    }
    return nullptr;
}

const Load* Network::find_load(int id) const {
    for (const Load& l : loads) {
        if (l.id == id) return &l;
    }
    return nullptr;
}

double Network::total_load() const {
    double sum = 0.0;
    for (const Load& l : loads) sum += l.p;
    return sum;
}

double Network::load_at_bus(int bus_id) const {
    double sum = 0.0;
    for (const Load& l : loads) {
        if (l.bus == bus_id) sum += l.p;
    }
    return sum;
}

void validate(const Network& network) {
    if (network.base_mva <= 0) {
        throw ValidationError("baseMVA must be positive");
    }
    if (network.buses.empty()) {
        throw ValidationError("network has no buses");
    }
    std::set<int> bus_ids;
    int ref_count = 0;
    for (const Bus& b : network.buses) {
        if (b.id <= 0) throw ValidationError("bus id must be positive, got " + std::to_string(b.id));
        if (!bus_ids.insert(b.id).second) {
            throw ValidationError("duplicate bus id " + std::to_string(b.id));
        }
        if (b.is_ref) ++ref_count;
    }
    if (ref_count != 1) {
        throw ValidationError("network must have exactly one reference bus, found " +
                              std::to_string(ref_count));
    }

    for (std::size_t i = 0; i < network.lines.size(); ++i) {
        const Line& ln = network.lines[i];
        std::string where = "line " + std::to_string(i + 1) + " (" + std::to_string(ln.from_bus) +
                            "-" + std::to_string(ln.to_bus) + ")";
        if (!bus_ids.count(ln.from_bus) || !bus_ids.count(ln.to_bus)) {
            throw ValidationError(where + " references a nonexistent bus");
        }
        if (ln.from_bus == ln.to_bus) throw ValidationError(where + " connects a bus to itself");
        if (!(ln.susceptance > 0)) {
            throw ValidationError(where + " must have positive susceptance");
        }
        if (!(ln.flow_limit > 0)) {
            throw ValidationError(where + " must have a positive flow limit");
        }
    }

    std::set<int> gen_ids;
    for (const Generator& g : network.generators) {
        std::string where = "generator " + std::to_string(g.id);
        if (!gen_ids.insert(g.id).second) throw ValidationError("duplicate generator id " +
                                                                std::to_string(g.id));
        if (!bus_ids.count(g.bus)) throw ValidationError(where + " references nonexistent bus " +
                                                         std::to_string(g.bus));
        if (g.p_min > g.p_max) {
            throw ValidationError(where + " has p_min > p_max");
        }
        if (g.emission_intensity < 0) {
            throw ValidationError(where + " has negative emission intensity");
        }
        if (g.cost_points.size() < 2) {
            throw ValidationError(where + " needs at least two cost breakpoints");
        }
        for (std::size_t k = 1; k < g.cost_points.size(); ++k) {
            if (!(g.cost_points[k].mw > g.cost_points[k - 1].mw)) {
                throw ValidationError(where + " cost breakpoints must be strictly increasing in MW");
            }
        }
        for (int k = 1; k < g.segment_count(); ++k) {
            if (g.segment_slope(k) < g.segment_slope(k - 1) - 1e-9) {
                throw ValidationError(where + " has a non-convex (decreasing-slope) cost curve");
            }
        }
    }

    std::set<int> load_ids;
    std::set<int> dc_buses;
    for (const Load& l : network.loads) {
        std::string where = "load " + std::to_string(l.id);
        if (!load_ids.insert(l.id).second) throw ValidationError("duplicate load id " +
                                                                 std::to_string(l.id));
        if (!bus_ids.count(l.bus)) throw ValidationError(where + " references nonexistent bus " +
                                                         std::to_string(l.bus));
        if (l.p < 0) throw ValidationError(where + " has negative demand");
        if (l.is_datacenter && !dc_buses.insert(l.bus).second) {
            throw ValidationError("bus " + std::to_string(l.bus) +
                                  " has more than one datacenter load");
        }
    }

    // Connectivity over the in-service graph.
    std::map<int, int> comp;
    for (const Bus& b : network.buses) comp[b.id] = b.id;
    std::function<int(int)> find = [&](int x) {
        while (comp[x] != x) {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        return x;
    };
    for (const Line& ln : network.lines) {
        comp[find(ln.from_bus)] = find(ln.to_bus);
    }
    int root = find(network.buses.front().id);
    for (const Bus& b : network.buses) {
        if (find(b.id) != root) {
            throw ValidationError("network is not connected: bus " + std::to_string(b.id) +
                                  " is unreachable from bus " +
                                  std::to_string(network.buses.front().id));
        }
    }

    double pmin_sum = 0.0;
    double pmax_sum = 0.0;
    for (const Generator& g : network.generators) {
        pmin_sum += g.p_min;
        pmax_sum += g.p_max;
    }
    double load_sum = network.total_load();
    if (pmin_sum > load_sum + 1e-9 || load_sum > pmax_sum + 1e-9) {
        throw ValidationError("infeasible by inspection: total load " + format_double(load_sum) +
                              " MW outside generation range [" + format_double(pmin_sum) + ", " +
                              format_double(pmax_sum) + "] MW");
    }
}

Network parse_case(const std::string& text) {
    CaseFile file = CaseParser(text).parse();

    Network net;
    auto base_it = file.scalars.find("mpc.baseMVA");
    if (base_it == file.scalars.end()) {
        throw ValidationError("case file is missing mpc.baseMVA");
    }
    net.base_mva = base_it->second;

    const Matrix& bus_m = require_matrix(file, "mpc.bus");
    const Matrix& gen_m = require_matrix(file, "mpc.gen");
    const Matrix& gencost_m = require_matrix(file, "mpc.gencost");
    auto emissions_it = file.matrices.find("mpc.emissions");
    if (emissions_it == file.matrices.end()) {
        throw ValidationError(
            "case file is missing mpc.emissions (one intensity per generator row)");
    }
    const Matrix& emissions_m = emissions_it->second;

    int next_load_id = 1;
    for (const auto& row : bus_m.rows) {
        if (row.size() < 3) {
            throw ParseError("mpc.bus rows need at least 3 columns (id, type, Pd)", bus_m.line, 1);
        }
        Bus b;
        b.id = int_field(row[0], "bus id", bus_m.line);
        int type = int_field(row[1], "bus type", bus_m.line);
        if (type < 1 || type > 3) {
            throw ValidationError("bus " + std::to_string(b.id) + " has unsupported type " +
                                  std::to_string(type) + " (expected 1, 2, or 3)");
        }
        b.is_ref = (type == 3);
        b.name = "bus" + std::to_string(b.id);
        net.buses.push_back(b);
        if (row[2] != 0.0) {
            Load l;
            l.id = next_load_id++;
            l.bus = b.id;
            l.p = row[2];
            net.loads.push_back(l);
        }
    }

    const Matrix& branch_m = require_matrix(file, "mpc.branch");
    for (const auto& row : branch_m.rows) {
        if (row.size() < 6) {
            throw ParseError("mpc.branch rows need at least 6 columns (through RATE_A)",
                             branch_m.line, 1);
        }
        int status = row.size() >= 11 ? int_field(row[10], "branch status", branch_m.line) : 1;
        if (status == 0) continue;
        Line ln;
        ln.from_bus = int_field(row[0], "branch from-bus", branch_m.line);
        ln.to_bus = int_field(row[1], "branch to-bus", branch_m.line);
        double x = row[3];
        if (!(x > 0.0)) {
            throw ValidationError("branch " + std::to_string(ln.from_bus) + "-" +
                                  std::to_string(ln.to_bus) +
                                  " needs a positive reactance, got " + format_double(x));
        }
        ln.susceptance = 1.0 / x;
        ln.flow_limit = row[5] > 0.0 ? row[5] : std::numeric_limits<double>::infinity();
        net.lines.push_back(ln);
    }

    for (const auto& row : gen_m.rows) {
        if (row.size() < 10) {
            throw ParseError("mpc.gen rows need at least 10 columns (through Pmin)", gen_m.line, 1);
        }
    }
    if (gencost_m.rows.size() != gen_m.rows.size()) {
        throw ValidationError("mpc.gencost has " + std::to_string(gencost_m.rows.size()) +
                              " rows but mpc.gen has " + std::to_string(gen_m.rows.size()));
    }
    std::size_t emissions_count = 0;
    std::vector<double> intensities;
    for (const auto& row : emissions_m.rows) {
        for (double v : row) {
            intensities.push_back(v);
            ++emissions_count;
        }
    }
    if (emissions_count != gen_m.rows.size()) {
        throw ValidationError("mpc.emissions has " + std::to_string(emissions_count) +
                              " entries but mpc.gen has " + std::to_string(gen_m.rows.size()) +
                              " rows");
    }

    for (std::size_t gi = 0; gi < gen_m.rows.size(); ++gi) {
        const auto& row = gen_m.rows[gi];
        int status = int_field(row[7], "generator status", gen_m.line);
        if (status == 0) continue;
        Generator g;
        g.id = static_cast<int>(gi) + 1;
        g.bus = int_field(row[0], "generator bus", gen_m.line);
        g.p_max = row[8];
        g.p_min = row[9];
        g.emission_intensity = intensities[gi];
        g.in_service = true;

        const auto& cost = gencost_m.rows[gi];
        if (cost.size() < 4) {
            throw ParseError("mpc.gencost rows need at least 4 columns", gencost_m.line, 1);
        }
        int model = int_field(cost[0], "gencost model", gencost_m.line);
        int ncost = int_field(cost[3], "gencost NCOST", gencost_m.line);
        if (model == 1) {
            if (ncost < 2) {
                throw ValidationError("generator " + std::to_string(g.id) +
                                      ": piecewise cost needs at least 2 points");
            }
            if (cost.size() < 4 + 2 * static_cast<std::size_t>(ncost)) {
                throw ParseError("mpc.gencost row " + std::to_string(gi + 1) +
                                     " declares more points than it has columns",
                                 gencost_m.line, 1);
            }
            for (int k = 0; k < ncost; ++k) {
                g.cost_points.push_back({cost[4 + 2 * static_cast<std::size_t>(k)],
                                         cost[5 + 2 * static_cast<std::size_t>(k)]});
            }
        } else if (model == 2) {
            if (ncost > 2) {
                throw ValidationError("generator " + std::to_string(g.id) +
                                      ": polynomial cost of degree > 1 is not supported");
            }
            if (cost.size() < 4 + static_cast<std::size_t>(ncost)) {
                throw ParseError("mpc.gencost row " + std::to_string(gi + 1) +
                                     " declares more coefficients than it has columns",
                                 gencost_m.line, 1);
            }
            // Coefficients are highest-degree first.
            double slope = 0.0;
            double fixed = 0.0;
            if (ncost == 2) {
                slope = cost[4];
                fixed = cost[5];
            } else if (ncost == 1) {
                fixed = cost[4];
            }
            double lo = g.p_min;
            double hi = g.p_max > g.p_min ? g.p_max : g.p_min + 1.0;
            g.cost_points.push_back({lo, fixed + slope * lo});
            g.cost_points.push_back({hi, fixed + slope * hi});
        } else {
            throw ValidationError("generator " + std::to_string(g.id) +
                                  ": unsupported gencost model " + std::to_string(model));
        }
        net.generators.push_back(std::move(g));
    }

    auto geo_it = file.matrices.find("mpc.bus_geo");
    if (geo_it != file.matrices.end()) {
        for (const auto& row : geo_it->second.rows) {
            if (row.size() < 3) {
                throw ParseError("mpc.bus_geo rows need 3 columns (bus, x, y)",
                                 geo_it->second.line, 1);
            }
            BusGeo geo;
            geo.bus = int_field(row[0], "bus_geo bus id", geo_it->second.line);
            geo.x = row[1];
            geo.y = row[2];
            if (!net.find_bus(geo.bus)) {
                throw ValidationError("mpc.bus_geo references nonexistent bus " +
                                      std::to_string(geo.bus));
            }
            net.geometry.push_back(geo);
        }
    }

    validate(net);
    return net;
}

Network load_case(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open case file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_case(buf.str());
}

std::string serialize_case(const Network& network) {
    std::ostringstream out;
    out << "function mpc = case" << network.buses.size() << "\n";
    out << "mpc.version = '2';\n";
    out << "mpc.baseMVA = " << format_double(network.base_mva) << ";\n";

    out << "mpc.bus = [\n";
    for (const Bus& b : network.buses) {
        double pd = network.load_at_bus(b.id);
        out << "\t" << b.id << "\t" << (b.is_ref ? 3 : 1) << "\t" << format_double(pd)
            << "\t0\t0\t0\t1\t1\t0\t0\t1\t1.1\t0.9;\n";
    }
    out << "];\n";

    out << "mpc.gen = [\n";
    for (const Generator& g : network.generators) {
        out << "\t" << g.bus << "\t0\t0\t0\t0\t1\t" << format_double(network.base_mva) << "\t1\t"
            << format_double(g.p_max) << "\t" << format_double(g.p_min) << ";\n";
    }
    out << "];\n";

    out << "mpc.branch = [\n";
    for (const Line& ln : network.lines) {
        double x = 1.0 / ln.susceptance;
        double rate = std::isinf(ln.flow_limit) ? 0.0 : ln.flow_limit;
        out << "\t" << ln.from_bus << "\t" << ln.to_bus << "\t0\t" << format_double(x) << "\t0\t"
            << format_double(rate) << "\t0\t0\t0\t0\t1\t-360\t360;\n";
    }
    out << "];\n";

    std::size_t width = 0;
    for (const Generator& g : network.generators) {
        width = std::max(width, 4 + 2 * g.cost_points.size());
    }
    out << "mpc.gencost = [\n";
    for (const Generator& g : network.generators) {
        out << "\t1\t0\t0\t" << g.cost_points.size();
        for (const CostPoint& p : g.cost_points) {
            out << "\t" << format_double(p.mw) << "\t" << format_double(p.cost);
        }
        for (std::size_t pad = 4 + 2 * g.cost_points.size(); pad < width; ++pad) out << "\t0";
        out << ";\n";
    }
    out << "];\n";

    out << "mpc.emissions = [\n";
    for (const Generator& g : network.generators) {
        out << "\t" << format_double(g.emission_intensity) << ";\n";
    }
    out << "];\n";

    if (!network.geometry.empty()) {
        out << "mpc.bus_geo = [\n";
        for (const BusGeo& geo : network.geometry) {
            out << "\t" << geo.bus << "\t" << format_double(geo.x) << "\t" << format_double(geo.y)
                << ";\n";
        }
        out << "];\n";
    }
    return out.str();
}

namespace {

// RFC-4180 field splitter; returns one record per row, handling quoted
// fields, embedded newlines, and CRLF endings.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };
    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_record();
            i += 2;
        } else if (c == '\n') {
            end_record();
            ++i;
        } else {
            field.push_back(c);
            field_started = true;
            ++i;
        }
    }
    if (field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return records;
}

double parse_csv_number(const std::string& s, int line, int column) {
    std::string trimmed = s;
    while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
        trimmed.erase(trimmed.begin());
    while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t'))
        trimmed.pop_back();
    if (trimmed.empty()) {
        throw ParseError("empty numeric field", line, column);
    }
    bool negative = false;
    std::size_t start = 0;
    if (trimmed[0] == '+' || trimmed[0] == '-') {
        negative = trimmed[0] == '-';
        start = 1;
    }
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(trimmed.data() + start, trimmed.data() + trimmed.size(), value);
    if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
        throw ParseError("malformed number '" + trimmed + "'", line, column);
    }
    return negative ? -value : value;
}

} // namespace

ScenarioSeries parse_timeseries(const std::string& text, const Network& network) {
    auto records = parse_csv(text);
    if (records.empty()) {
        throw ParseError("time series is empty", 1, 1);
    }
    const auto& header = records[0];
    if (header.empty() || header[0] != "t") {
        throw ParseError("time series header must start with column 't'", 1, 1);
    }

    struct Column {
        bool is_load = false;
        int id = 0;
    };
    std::vector<Column> columns;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string& h = header[c];
        Column col;
        std::string id_text;
        if (h.rfind("load:", 0) == 0) {
            col.is_load = true;
            id_text = h.substr(5);
        } else if (h.rfind("gen_pmax:", 0) == 0) {
            col.is_load = false;
            id_text = h.substr(9);
        } else {
            throw ParseError("unknown column '" + h + "' (expected load:<id> or gen_pmax:<id>)", 1,
                             static_cast<int>(c) + 1);
        }
        int id = 0;
        auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (ec != std::errc() || ptr != id_text.data() + id_text.size()) {
            throw ParseError("malformed id in column '" + h + "'", 1, static_cast<int>(c) + 1);
        }
        if (col.is_load && !network.find_load(id)) {
            throw ValidationError("time series references nonexistent load id " +
                                  std::to_string(id));
        }
        if (!col.is_load && !network.find_generator(id)) {
            throw ValidationError("time series references nonexistent generator id " +
                                  std::to_string(id));
        }
        col.id = id;
        columns.push_back(col);
    }

    ScenarioSeries series;
    series.timesteps = static_cast<int>(records.size()) - 1;
    if (series.timesteps == 0) {
        throw ParseError("time series has a header but no data rows", 1, 1);
    }
    for (const Column& col : columns) {
        auto& dst = col.is_load ? series.load_multipliers[col.id] : series.gen_pmax[col.id];
        dst.resize(static_cast<std::size_t>(series.timesteps));
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        int line = static_cast<int>(r) + 1;
        if (rec.size() != header.size()) {
            throw ParseError("row has " + std::to_string(rec.size()) + " fields, expected " +
                                 std::to_string(header.size()),
                             line, 1);
        }
        double t_val = parse_csv_number(rec[0], line, 1);
        int t = int_field(t_val, "t", line);
        if (t != static_cast<int>(r)) {
            throw ParseError("t must increase sequentially from 1; row " + std::to_string(r) +
                                 " has t=" + std::to_string(t),
                             line, 1);
        }
        for (std::size_t c = 1; c < rec.size(); ++c) {
            double v = parse_csv_number(rec[c], line, static_cast<int>(c) + 1);
            if (v < 0) {
                throw ParseError("negative value " + format_double(v) + " in column '" +
                                     header[c] + "'",
                                 line, static_cast<int>(c) + 1);
            }
            const Column& col = columns[c - 1];
            auto& dst = col.is_load ? series.load_multipliers[col.id] : series.gen_pmax[col.id];
            dst[r - 1] = v;
        }
    }
    return series;
}

ScenarioSeries load_timeseries(const std::string& path, const Network& network) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open time series file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_timeseries(buf.str(), network);
}

Network apply_timestep(const Network& network, const ScenarioSeries& series, int t) {
    if (t < 1 || t > series.timesteps) {
        throw ValidationError("timestep " + std::to_string(t) + " outside series range [1, " +
                              std::to_string(series.timesteps) + "]");
    }
    Network out = network;
    for (const auto& [load_id, factors] : series.load_multipliers) {
        for (Load& l : out.loads) {
            if (l.id == load_id) {
                l.p *= factors[static_cast<std::size_t>(t) - 1];
            }
        }
    }
    for (const auto& [gen_id, pmax] : series.gen_pmax) {
        for (Generator& g : out.generators) {
            if (g.id == gen_id) {
                g.p_max = pmax[static_cast<std::size_t>(t) - 1];
            }
        }
    }
    return out;
}

Network add_datacenter_loads(const Network& network, const std::vector<int>& bus_ids,
                             double nominal_mw) {
    if (nominal_mw < 0) {
        throw ValidationError("datacenter nominal demand must be nonnegative");
    }
    Network out = network;
    int next_id = 0;
    for (const Load& l : out.loads) next_id = std::max(next_id, l.id);
    ++next_id;
    for (int bus : bus_ids) {
        if (!out.find_bus(bus)) {
            throw ValidationError("datacenter bus " + std::to_string(bus) + " does not exist");
        }
        bool found = false;
        for (Load& l : out.loads) {
            if (l.bus == bus && l.is_datacenter) {
                l.p = nominal_mw;
                found = true;
                break;
            }
        }
        if (!found) {
            Load l;
            l.id = next_id++;
            l.bus = bus;
            l.p = nominal_mw;
            l.is_datacenter = true;
            out.loads.push_back(l);
        }
    }
    return out;
}

} // namespace gridcarbon
