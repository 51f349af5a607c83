#include "rotarn/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rotarn {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const std::string& name, const std::string& what) {
    throw Error("matrix market '" + name + "': " + what);
}

void check_finite(const Complex& v, const std::string& name) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        fail(name, "non-finite entry");
    }
}

}  // namespace

ComplexMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("matrix market: cannot open '" + path + "'");
    return read_matrix_market(in, path);
}

ComplexMatrix read_matrix_market(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) fail(name, "empty file");
    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        fail(name, "bad header line");
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    const bool coordinate = format == "coordinate";
    if (!coordinate && format != "array") fail(name, "unknown format '" + format + "'");
    const bool complex_field = field == "complex";
    if (!complex_field && field != "real" && field != "integer") {
        fail(name, "unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric" &&
        symmetry != "skew-symmetric" && symmetry != "hermitian") {
        fail(name, "unsupported symmetry '" + symmetry + "'");
    }

    // skip comments and blank lines
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sz(line);
    long rows = 0, cols = 0, nnz = 0;
    if (coordinate) {
        if (!(sz >> rows >> cols >> nnz)) fail(name, "bad size line");
    } else {
        if (!(sz >> rows >> cols)) fail(name, "bad size line");
    }
    if (rows < 1 || cols < 1) fail(name, "dimensions must be >= 1");

    ComplexMatrix a = ComplexMatrix::Zero(rows, cols);
    auto read_value = [&](std::istringstream& ls) {
        double re = 0.0, im = 0.0;
        if (!(ls >> re)) fail(name, "bad entry value");
        if (complex_field && !(ls >> im)) fail(name, "missing imaginary part");
        return Complex(re, im);
    };
    auto mirror = [&](long i, long j, const Complex& v) {
        if (i == j || symmetry == "general") return;
        if (symmetry == "symmetric") a(j, i) = v;
        else if (symmetry == "skew-symmetric") a(j, i) = -v;
        else a(j, i) = std::conj(v);
    };

    if (coordinate) {
        long seen = 0;
        while (seen < nnz && std::getline(in, line)) {
            if (line.empty() || line[0] == '%') continue;
            std::istringstream ls(line);
            long i = 0, j = 0;
            if (!(ls >> i >> j)) fail(name, "bad coordinate line");
            if (i < 1 || i > rows || j < 1 || j > cols) fail(name, "index out of range");
            Complex v = read_value(ls);
            check_finite(v, name);
            a(i - 1, j - 1) = v;
            mirror(i - 1, j - 1, v);
            ++seen;
        }
        if (seen < nnz) fail(name, "fewer entries than declared");
    } else {
        // array format: column-major dense listing of the stored triangle
        long i = 0, j = 0;
        long col_start = 0;
        auto advance = [&]() {
            ++i;
            if (i >= rows) {
                ++j;
                col_start = symmetry == "general" ? 0 : j;
                i = col_start;
            }
        };
        long expected = 0;
        if (symmetry == "general") expected = rows * cols;
        else expected = cols * (2 * rows - cols + 1) / 2;
        long seen = 0;
        while (seen < expected && std::getline(in, line)) {
            if (line.empty() || line[0] == '%') continue;
            std::istringstream ls(line);
            while (ls && seen < expected) {
                double re;
                if (!(ls >> re)) break;
                Complex v(re, 0.0);
                if (complex_field) {
                    double im;
                    if (!(ls >> im)) fail(name, "missing imaginary part");
                    v.imag(im);
                }
                check_finite(v, name);
                a(i, j) = v;
                mirror(i, j, v);
                advance();
                ++seen;
            }
        }
        if (seen < expected) fail(name, "fewer entries than declared");
    }
    return a;
}

void write_matrix_market(const std::string& path, const ComplexMatrix& a,
                         MmFormat format) {
    std::ofstream out(path);
    if (!out) throw Error("matrix market: cannot write '" + path + "'");
    write_matrix_market(out, a, format);
}

void write_matrix_market(std::ostream& out, const ComplexMatrix& a, MmFormat format) {
    out.precision(17);
    if (format == MmFormat::Coordinate) {
        long nnz = 0;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                if (a(i, j) != Complex(0.0, 0.0)) ++nnz;
        out << "%%MatrixMarket matrix coordinate complex general\n";
        out << a.rows() << " " << a.cols() << " " << nnz << "\n";
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                const Complex& v = a(i, j);
                if (v != Complex(0.0, 0.0)) {
                    out << (i + 1) << " " << (j + 1) << " " << v.real() << " "
                        << v.imag() << "\n";
                }
            }
        }
    } else {
        out << "%%MatrixMarket matrix array complex general\n";
        out << a.rows() << " " << a.cols() << "\n";
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                out << a(i, j).real() << " " << a(i, j).imag() << "\n";
            }
        }
    }
}

}  // namespace rotarn
