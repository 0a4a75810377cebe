#include "qsl/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

namespace {

constexpr std::size_t kDimCap = 200;

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ": line " + std::to_string(line) + ": " + msg, line);
}

}  // namespace

Complex parse_complex(const std::string& token) {
    const char* s = token.c_str();
    char* end1 = nullptr;
    const double a = std::strtod(s, &end1);
    if (end1 == s) {
        // No leading number: allow the units "i", "+i", "-i".
        double sign = 1.0;
        const char* p = s;
        if (*p == '+' || *p == '-') {
            sign = (*p == '-') ? -1.0 : 1.0;
            ++p;
        }
        if (p[0] == 'i' && p[1] == '\0')
            return Complex(0.0, sign);
        throw Error("parse_complex: cannot parse '" + token + "'");
    }
    if (*end1 == '\0')
        return Complex(a, 0.0);
    if (end1[0] == 'i' && end1[1] == '\0')
        return Complex(0.0, a);
    if (*end1 != '+' && *end1 != '-')
        throw Error("parse_complex: cannot parse '" + token + "'");
    if (end1[1] == 'i' && end1[2] == '\0')
        return Complex(a, end1[0] == '-' ? -1.0 : 1.0);
    char* end2 = nullptr;
    const double b = std::strtod(end1, &end2);
    if (end2 == end1 || end2[0] != 'i' || end2[1] != '\0')
        throw Error("parse_complex: cannot parse '" + token + "'");
    return Complex(a, b);
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex z) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

ComplexMatrix read_matrix_text(const std::string& text, const std::string& origin) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;

    if (!std::getline(is, line))
        fail(origin, 1, "empty matrix file");
    ++lineno;
    std::vector<std::string> head = split_ws(line);
    if (head.size() != 2 || head[0] != "dim")
        fail(origin, lineno, "expected header 'dim n'");
    char* end = nullptr;
    const long n = std::strtol(head[1].c_str(), &end, 10);
    if (*end != '\0' || n < 1 || static_cast<std::size_t>(n) > kDimCap)
        fail(origin, lineno, "dimension must be an integer in [1, " + std::to_string(kDimCap) + "]");

    ComplexMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            fail(origin, lineno + 1, "matrix row " + std::to_string(i + 1) + " missing");
        ++lineno;
        std::vector<std::string> toks = split_ws(line);
        if (toks.size() != static_cast<std::size_t>(n))
            fail(origin, lineno,
                 "expected " + std::to_string(n) + " entries, got " + std::to_string(toks.size()));
        for (long j = 0; j < n; ++j) {
            Complex z;
            try {
                z = parse_complex(toks[static_cast<std::size_t>(j)]);
            } catch (const Error& e) {
                fail(origin, lineno, e.what());
            }
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                fail(origin, lineno, "matrix entries must be finite");
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = z;
        }
    }
    return m;
}

std::vector<CVector> read_basis_text(const std::string& text, const std::string& origin) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;

    if (!std::getline(is, line))
        fail(origin, 1, "empty basis file");
    ++lineno;
    std::vector<std::string> head = split_ws(line);
    if (head.size() != 2 || head[0] != "vectors")
        fail(origin, lineno, "expected header 'vectors k'");
    char* end = nullptr;
    const long k = std::strtol(head[1].c_str(), &end, 10);
    if (*end != '\0' || k < 1 || static_cast<std::size_t>(k) > kDimCap)
        fail(origin, lineno, "vector count must be an integer in [1, " + std::to_string(kDimCap) + "]");

    std::vector<CVector> out;
    std::size_t dim = 0;
    for (long r = 0; r < k; ++r) {
        if (!std::getline(is, line))
            fail(origin, lineno + 1, "vector row " + std::to_string(r + 1) + " missing");
        ++lineno;
        std::vector<std::string> toks = split_ws(line);
        if (toks.empty())
            fail(origin, lineno, "empty vector row");
        if (r == 0) {
            dim = toks.size();
            if (dim > kDimCap)
                fail(origin, lineno, "vector length exceeds the cap of " + std::to_string(kDimCap));
        } else if (toks.size() != dim) {
            fail(origin, lineno, "vector rows have mixed lengths");
        }
        CVector v(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            try {
                v[j] = parse_complex(toks[j]);
            } catch (const Error& e) {
                fail(origin, lineno, e.what());
            }
            if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
                fail(origin, lineno, "vector entries must be finite");
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string write_matrix_text(const ComplexMatrix& m) {
    std::string out = "dim " + std::to_string(m.rows()) + "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0)
                out += ' ';
            out += format_complex(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string write_basis_text(const std::vector<CVector>& vectors) {
    std::string out = "vectors " + std::to_string(vectors.size()) + "\n";
    for (const CVector& v : vectors) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j > 0)
                out += ' ';
            out += format_complex(v[j]);
        }
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

ComplexMatrix read_matrix_file(const std::string& path) {
    return read_matrix_text(read_file(path), path);
}

std::vector<CVector> read_basis_file(const std::string& path) {
    return read_basis_text(read_file(path), path);
}

}
