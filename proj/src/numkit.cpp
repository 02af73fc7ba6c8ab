#include "tsf/numkit.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace tsf {

double sigmoid(double x) {
    // Branch on sign so exp never sees a large positive argument.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double tanh_act(double x) { return std::tanh(x); }

Vec matvec(const Mat& w, const Vec& v) {
    if (w.cols != v.size()) {
        throw std::invalid_argument("matvec: W.cols=" + std::to_string(w.cols) +
                                    " does not match v.len=" + std::to_string(v.size()));
    }
    Vec out(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
        double acc = 0.0;
        const double* row = w.data.data() + r * w.cols;
        for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: a.len=" + std::to_string(a.size()) +
                                    " does not match b.len=" + std::to_string(b.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Vec affine(const Mat& w1, const Vec& v1, const Mat& w2, const Vec& v2, const Vec& b) {
    if (w1.cols != v1.size()) {
        throw std::invalid_argument("affine: W1.cols=" + std::to_string(w1.cols) +
                                    " does not match v1.len=" + std::to_string(v1.size()));
    }
    if (w2.cols != v2.size()) {
        throw std::invalid_argument("affine: W2.cols=" + std::to_string(w2.cols) +
                                    " does not match v2.len=" + std::to_string(v2.size()));
    }
    if (w1.rows != b.size()) {
        throw std::invalid_argument("affine: W1.rows=" + std::to_string(w1.rows) +
                                    " does not match b.len=" + std::to_string(b.size()));
    }
    if (w2.rows != b.size()) {
        throw std::invalid_argument("affine: W2.rows=" + std::to_string(w2.rows) +
                                    " does not match b.len=" + std::to_string(b.size()));
    }
    Vec out(b);
    for (std::size_t r = 0; r < w1.rows; ++r) {
        double acc = 0.0;
        const double* row1 = w1.data.data() + r * w1.cols;
        for (std::size_t c = 0; c < w1.cols; ++c) acc += row1[c] * v1[c];
        const double* row2 = w2.data.data() + r * w2.cols;
        for (std::size_t c = 0; c < w2.cols; ++c) acc += row2[c] * v2[c];
        out[r] += acc;
    }
    return out;
}

Mat init_uniform(Rng& rng, std::size_t rows, std::size_t cols, double bound) {
    if (bound <= 0.0) {
        throw std::invalid_argument("init_uniform: bound must be positive, got " +
                                    std::to_string(bound));
    }
    Mat m(rows, cols);
    for (double& x : m.data) x = rng.uniform(-bound, bound);
    return m;
}

Vec init_uniform_vec(Rng& rng, std::size_t len, double bound) {
    if (bound <= 0.0) {
        throw std::invalid_argument("init_uniform_vec: bound must be positive, got " +
                                    std::to_string(bound));
    }
    Vec v(len);
    for (double& x : v) x = rng.uniform(-bound, bound);
    return v;
}

std::string double_to_string(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace tsf
