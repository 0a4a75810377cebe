#include "qsl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include "qsl/matrix_io.hpp"

namespace qsl {

namespace {

struct Pair {
    int line = 0;
    std::vector<std::string> values;
    bool used = false;
};

struct Node {
    int line = 0;
    bool used = false;
    std::map<std::string, Pair> pairs;
    std::map<std::string, Node> children;
};

bool valid_key(const std::string& k) {
    if (k.empty() || (!std::isalpha(static_cast<unsigned char>(k[0])) && k[0] != '_'))
        return false;
    return std::all_of(k.begin(), k.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

Node parse_tree(const std::string& text, const std::string& origin) {
    Node root;
    std::vector<Node*> stack{&root};
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok)
            toks.push_back(tok);
        if (toks.empty())
            continue;

        if (toks.size() == 1 && toks[0] == "}") {
            if (stack.size() == 1)
                throw ConfigError(origin + ": line " + std::to_string(lineno) +
                                      ": unmatched '}'",
                                  lineno);
            stack.pop_back();
            continue;
        }
        if (toks.back() == "{") {
            if (toks.size() != 2 || !valid_key(toks[0]))
                throw ConfigError(origin + ": line " + std::to_string(lineno) +
                                      ": malformed section header",
                                  lineno);
            Node& parent = *stack.back();
            if (parent.children.count(toks[0]) || parent.pairs.count(toks[0]))
                throw ConfigError(origin + ": line " + std::to_string(lineno) +
                                      ": duplicate key '" + toks[0] + "'",
                                  lineno);
            Node& child = parent.children[toks[0]];
            child.line = lineno;
            stack.push_back(&child);
            continue;
        }
        if (!valid_key(toks[0]))
            throw ConfigError(
                origin + ": line " + std::to_string(lineno) + ": malformed key '" + toks[0] + "'",
                lineno);
        if (toks.size() < 2)
            throw ConfigError(origin + ": line " + std::to_string(lineno) + ": key '" + toks[0] +
                                  "' has no value",
                              lineno);
        Node& parent = *stack.back();
        if (parent.children.count(toks[0]) || parent.pairs.count(toks[0]))
            throw ConfigError(origin + ": line " + std::to_string(lineno) + ": duplicate key '" +
                                  toks[0] + "'",
                              lineno);
        Pair& pr = parent.pairs[toks[0]];
        pr.line = lineno;
        pr.values.assign(toks.begin() + 1, toks.end());
    }
    if (stack.size() != 1)
        throw ConfigError(origin + ": unexpected end of file inside a section", lineno);
    return root;
}

[[noreturn]] void field_error(const std::string& origin, const std::string& field,
                              const std::string& msg, int line) {
    throw ConfigError(origin + ": " + field + ": " + msg, line);
}

class Extractor {
public:
    Extractor(Node& node, std::string origin, std::string prefix)
        : node_(node), origin_(std::move(origin)), prefix_(std::move(prefix)) {}

    std::string path(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    Pair* find(const std::string& key) {
        auto it = node_.pairs.find(key);
        if (it == node_.pairs.end())
            return nullptr;
        it->second.used = true;
        return &it->second;
    }

    Pair& require(const std::string& key) {
        Pair* p = find(key);
        if (!p)
            field_error(origin_, path(key), "missing required key", node_.line);
        return *p;
    }

    Node* find_child(const std::string& key) {
        auto it = node_.children.find(key);
        if (it == node_.children.end())
            return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string single(const Pair& p, const std::string& key) {
        if (p.values.size() != 1)
            field_error(origin_, path(key), "expected exactly one value", p.line);
        return p.values[0];
    }

    double real(const std::string& key) {
        const Pair& p = require(key);
        return real_value(single(p, key), key, p.line);
    }

    double real_value(const std::string& tok, const std::string& key, int line) {
        try {
            return parse_real_token(tok);
        } catch (const Error& e) {
            field_error(origin_, path(key), e.what(), line);
        }
    }

    long integer(const std::string& key, long lo, long hi) {
        const Pair& p = require(key);
        const std::string tok = single(p, key);
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0' || end == tok.c_str())
            field_error(origin_, path(key), "expected an integer", p.line);
        if (v < lo || v > hi)
            field_error(origin_, path(key),
                        "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                        p.line);
        return v;
    }

    std::uint64_t u64(const std::string& key) {
        const Pair& p = require(key);
        const std::string tok = single(p, key);
        char* end = nullptr;
        const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
        if (*end != '\0' || end == tok.c_str() || tok[0] == '-')
            field_error(origin_, path(key), "expected an unsigned integer", p.line);
        return static_cast<std::uint64_t>(v);
    }

    std::string word(const std::string& key) {
        const Pair& p = require(key);
        return single(p, key);
    }

    void check_all_used() const {
        for (const auto& [key, p] : node_.pairs)
            if (!p.used)
                field_error(origin_, path(key), "unknown key", p.line);
        for (const auto& [key, child] : node_.children)
            if (!child.used)
                field_error(origin_, path(key), "unknown section", child.line);
    }

    Node& node_;
    std::string origin_;
    std::string prefix_;
};

void parse_tolerances(Node& node, const std::string& origin, BoundOptions& opts) {
    Extractor ex(node, origin, "tolerances");
    if (Pair* p = ex.find("dispersion_restarts")) {
        const std::string tok = ex.single(*p, "dispersion_restarts");
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0' || v < 1 || v > 10000)
            field_error(origin, "tolerances.dispersion_restarts", "must lie in [1, 10000]",
                        p->line);
        opts.dispersion.restarts = static_cast<int>(v);
    }
    if (Pair* p = ex.find("dispersion_iteration_cap")) {
        const std::string tok = ex.single(*p, "dispersion_iteration_cap");
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0' || v < 1 || v > 100000000)
            field_error(origin, "tolerances.dispersion_iteration_cap",
                        "must lie in [1, 100000000]", p->line);
        opts.dispersion.iteration_cap = static_cast<int>(v);
    }
    if (Pair* p = ex.find("dispersion_grad_tol")) {
        const double v = ex.real_value(ex.single(*p, "dispersion_grad_tol"),
                                       "dispersion_grad_tol", p->line);
        if (!(v > 0.0))
            field_error(origin, "tolerances.dispersion_grad_tol", "must be positive", p->line);
        opts.dispersion.grad_tol = v;
    }
    if (Pair* p = ex.find("dispersion_seed")) {
        (void)p;
        opts.dispersion.seed = ex.u64("dispersion_seed");
    }
    if (Pair* p = ex.find("reducing_threshold")) {
        const double v =
            ex.real_value(ex.single(*p, "reducing_threshold"), "reducing_threshold", p->line);
        if (!(v >= 0.0))
            field_error(origin, "tolerances.reducing_threshold", "must be nonnegative", p->line);
        opts.crossing.reducing_threshold = v;
    }
    if (Pair* p = ex.find("sine_tol")) {
        const double v = ex.real_value(ex.single(*p, "sine_tol"), "sine_tol", p->line);
        if (!(v >= 0.0) || v >= 1.0)
            field_error(origin, "tolerances.sine_tol", "must lie in [0, 1)", p->line);
        opts.crossing.sine_tol = v;
    }
    if (Pair* p = ex.find("time_tol_scale")) {
        const double v = ex.real_value(ex.single(*p, "time_tol_scale"), "time_tol_scale", p->line);
        if (!(v > 0.0))
            field_error(origin, "tolerances.time_tol_scale", "must be positive", p->line);
        opts.crossing.time_tol_scale = v;
    }
    if (Pair* p = ex.find("scan_resolution")) {
        const double v =
            ex.real_value(ex.single(*p, "scan_resolution"), "scan_resolution", p->line);
        if (!(v > 0.0) || v > 0.1)
            field_error(origin, "tolerances.scan_resolution", "must lie in (0, 0.1]", p->line);
        opts.crossing.resolution = v;
    }
    if (Pair* p = ex.find("chain_tol")) {
        const double v = ex.real_value(ex.single(*p, "chain_tol"), "chain_tol", p->line);
        if (!(v > 0.0))
            field_error(origin, "tolerances.chain_tol", "must be positive", p->line);
        opts.chain_tol = v;
    }
    ex.check_all_used();
}

}  // namespace

double parse_real_token(const std::string& token) {
    const std::size_t pos = token.find("pi");
    if (pos == std::string::npos) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (*end != '\0' || end == token.c_str())
            throw Error("cannot parse number '" + token + "'");
        return v;
    }
    double coef = 1.0;
    const std::string head = token.substr(0, pos);
    if (head == "-") {
        coef = -1.0;
    } else if (!head.empty() && head != "+") {
        char* end = nullptr;
        coef = std::strtod(head.c_str(), &end);
        if (*end != '\0' || end == head.c_str())
            throw Error("cannot parse number '" + token + "'");
    }
    double den = 1.0;
    const std::string tail = token.substr(pos + 2);
    if (!tail.empty()) {
        if (tail[0] != '/')
            throw Error("cannot parse number '" + token + "'");
        const std::string den_str = tail.substr(1);
        char* end = nullptr;
        den = std::strtod(den_str.c_str(), &end);
        if (*end != '\0' || end == den_str.c_str() || den == 0.0)
            throw Error("cannot parse number '" + token + "'");
    }
    return coef * std::numbers::pi / den;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Node root = parse_tree(text, origin);
    RunConfig config;
    Extractor ex(root, origin, "");

    Node* scen = ex.find_child("scenario");
    if (!scen)
        field_error(origin, "scenario", "missing required section", 0);
    {
        Extractor sx(*scen, origin, "scenario");
        const std::string type = sx.word("type");
        if (type == "two_level") {
            config.scenario.type = ScenarioConfig::Type::two_level;
            config.scenario.e1 = sx.real("e1");
            config.scenario.e2 = sx.real("e2");
            if (config.scenario.e1 == config.scenario.e2)
                field_error(origin, "scenario.e2", "energy levels must differ", scen->line);
        } else if (type == "ensemble") {
            config.scenario.type = ScenarioConfig::Type::ensemble;
            config.scenario.ensemble.dim = static_cast<std::size_t>(sx.integer("dim", 2, 200));
            config.scenario.ensemble.rank = static_cast<std::size_t>(
                sx.integer("rank", 1, static_cast<long>(config.scenario.ensemble.dim) - 1));
            const std::string kind = sx.word("ensemble");
            if (kind == "gue")
                config.scenario.ensemble.kind = EnsembleKind::gue;
            else if (kind == "diagonal_plus_coupling")
                config.scenario.ensemble.kind = EnsembleKind::diagonal_plus_coupling;
            else
                field_error(origin, "scenario.ensemble",
                            "expected 'gue' or 'diagonal_plus_coupling'", scen->line);
            config.scenario.ensemble.seed = sx.u64("seed");
            config.scenario.ensemble.count =
                static_cast<std::size_t>(sx.integer("count", 1, 100000));
        } else if (type == "explicit") {
            config.scenario.type = ScenarioConfig::Type::explicit_files;
            config.scenario.matrix_path = sx.word("matrix");
            config.scenario.basis_path = sx.word("basis");
        } else {
            field_error(origin, "scenario.type",
                        "expected 'two_level', 'ensemble' or 'explicit'", scen->line);
        }
        sx.check_all_used();
    }

    {
        const Pair& p = ex.require("theta_list");
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            const std::string field = "theta_list[" + std::to_string(i) + "]";
            const double theta = ex.real_value(p.values[i], field, p.line);
            if (!(theta > 0.0) || theta > std::numbers::pi / 2.0 + 1e-15)
                field_error(origin, field, "must lie in (0, pi/2]", p.line);
            config.theta_list.push_back(theta);
        }
    }

    config.t_max = ex.real("t_max");
    if (!(config.t_max > 0.0) || !std::isfinite(config.t_max))
        field_error(origin, "t_max", "must be positive and finite", 0);

    if (Pair* p = ex.find("resolution")) {
        config.resolution = ex.real_value(ex.single(*p, "resolution"), "resolution", p->line);
        if (!(config.resolution > 1e-9) || !(config.resolution < 0.1))
            field_error(origin, "resolution", "must lie in (1e-9, 0.1)", p->line);
    }
    if (Pair* p = ex.find("output"))
        config.output_dir = ex.single(*p, "output");
    if (Pair* p = ex.find("formats")) {
        config.format_csv = config.format_json = false;
        if (p->values.empty())
            field_error(origin, "formats", "needs at least one of: csv json", p->line);
        for (const std::string& v : p->values) {
            if (v == "csv") {
                if (config.format_csv)
                    field_error(origin, "formats", "duplicate 'csv'", p->line);
                config.format_csv = true;
            } else if (v == "json") {
                if (config.format_json)
                    field_error(origin, "formats", "duplicate 'json'", p->line);
                config.format_json = true;
            } else {
                field_error(origin, "formats", "expected 'csv' or 'json', got '" + v + "'",
                            p->line);
            }
        }
    }
    if (Pair* p = ex.find("jobs")) {
        const std::string tok = ex.single(*p, "jobs");
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0' || end == tok.c_str() || v < 1 || v > 256)
            field_error(origin, "jobs", "must be an integer in [1, 256]", p->line);
        config.jobs = static_cast<int>(v);
    }
    if (Node* tol = ex.find_child("tolerances"))
        parse_tolerances(*tol, origin, config.bounds);

    ex.check_all_used();
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    os << "scenario {\n";
    switch (c.scenario.type) {
        case ScenarioConfig::Type::two_level:
            os << "  type two_level\n";
            os << "  e1 " << format_real(c.scenario.e1) << "\n";
            os << "  e2 " << format_real(c.scenario.e2) << "\n";
            break;
        case ScenarioConfig::Type::ensemble:
            os << "  type ensemble\n";
            os << "  dim " << c.scenario.ensemble.dim << "\n";
            os << "  rank " << c.scenario.ensemble.rank << "\n";
            os << "  ensemble "
               << (c.scenario.ensemble.kind == EnsembleKind::gue ? "gue"
                                                                 : "diagonal_plus_coupling")
               << "\n";
            os << "  seed " << c.scenario.ensemble.seed << "\n";
            os << "  count " << c.scenario.ensemble.count << "\n";
            break;
        case ScenarioConfig::Type::explicit_files:
            os << "  type explicit\n";
            os << "  matrix " << c.scenario.matrix_path << "\n";
            os << "  basis " << c.scenario.basis_path << "\n";
            break;
    }
    os << "}\n";
    os << "theta_list";
    for (double th : c.theta_list)
        os << " " << format_real(th);
    os << "\n";
    os << "t_max " << format_real(c.t_max) << "\n";
    os << "resolution " << format_real(c.resolution) << "\n";
    os << "output " << c.output_dir << "\n";
    os << "formats";
    if (c.format_csv)
        os << " csv";
    if (c.format_json)
        os << " json";
    os << "\n";
    os << "jobs " << c.jobs << "\n";
    os << "tolerances {\n";
    os << "  dispersion_restarts " << c.bounds.dispersion.restarts << "\n";
    os << "  dispersion_iteration_cap " << c.bounds.dispersion.iteration_cap << "\n";
    os << "  dispersion_grad_tol " << format_real(c.bounds.dispersion.grad_tol) << "\n";
    os << "  dispersion_seed " << c.bounds.dispersion.seed << "\n";
    os << "  reducing_threshold " << format_real(c.bounds.crossing.reducing_threshold) << "\n";
    os << "  sine_tol " << format_real(c.bounds.crossing.sine_tol) << "\n";
    os << "  time_tol_scale " << format_real(c.bounds.crossing.time_tol_scale) << "\n";
    os << "  scan_resolution " << format_real(c.bounds.crossing.resolution) << "\n";
    os << "  chain_tol " << format_real(c.bounds.chain_tol) << "\n";
    os << "}\n";
    return os.str();
}

std::vector<Instance> load_instances(const RunConfig& config) {
    switch (config.scenario.type) {
        case ScenarioConfig::Type::two_level:
            return {two_level(config.scenario.e1, config.scenario.e2).instance()};
        case ScenarioConfig::Type::ensemble:
            return sample_ensemble(config.scenario.ensemble);
        case ScenarioConfig::Type::explicit_files: {
            ComplexMatrix m = read_matrix_file(config.scenario.matrix_path);
            std::vector<CVector> span = read_basis_file(config.scenario.basis_path);
            HermitianOperator h(m);
            OrthogonalProjector p = project_onto_span(span);
            if (p.dim() != h.dim())
                throw ConfigError("explicit scenario: basis vectors do not match the matrix "
                                  "dimension");
            return {Instance{"explicit_0", std::move(h), std::move(p)}};
        }
    }
    throw Error("load_instances: unreachable");
}

}
