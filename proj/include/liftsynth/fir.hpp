#pragma once

#include "liftsynth/state_space.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace liftsynth {

/// FIR filter C_0 + C_1 z^{-1} + ... + C_N z^{-N} with p x m matrix taps.
///
/// The tap list is the design variable of every synthesis problem in this
/// toolkit. FIR realizations are nilpotent, hence always Schur.
struct FirFilter {
    std::vector<Matrix> taps;
    double period = 1.0;

    FirFilter() = default;
    FirFilter(std::vector<Matrix> t, double h) : taps(std::move(t)), period(h) {
        if (taps.empty())
            throw std::invalid_argument("FirFilter: needs at least one tap");
        for (const auto& c : taps)
            if (c.rows() != taps.front().rows() || c.cols() != taps.front().cols())
                throw std::invalid_argument("FirFilter: ragged tap dimensions");
        if (!(period > 0.0))
            throw std::invalid_argument("FirFilter: period must be positive");
    }

    static FirFilter zero(Eigen::Index p, Eigen::Index m, int order, double h) {
        return {std::vector<Matrix>(order + 1, Matrix::Zero(p, m)), h};
    }

    static FirFilter scalar(std::vector<double> coeffs, double h) {
        std::vector<Matrix> t;
        t.reserve(coeffs.size());
        for (double c : coeffs) t.push_back(Matrix::Constant(1, 1, c));
        return {std::move(t), h};
    }

    int order() const { return static_cast<int>(taps.size()) - 1; }
    Eigen::Index outputs() const { return taps.front().rows(); }
    Eigen::Index inputs() const { return taps.front().cols(); }

    ComplexMatrix eval(double omega) const {
        ComplexMatrix acc = ComplexMatrix::Zero(outputs(), inputs());
        for (size_t k = 0; k < taps.size(); ++k)
            acc += std::exp(std::complex<double>(0.0, -omega * static_cast<double>(k))) *
                   taps[k].cast<std::complex<double>>();
        return acc;
    }

    /// Shift-register realization; states hold the last `order` inputs.
    StateSpaceModel to_state_space() const {
        const auto m = inputs();
        const auto p = outputs();
        const int n = order();
        if (n == 0)
            return StateSpaceModel::gain(taps[0], TimeDomain::Discrete, period);
        Matrix A = Matrix::Zero(n * m, n * m);
        for (int i = 0; i + 1 < n; ++i)
            A.block(i * m, (i + 1) * m, m, m) = Matrix::Identity(m, m);
        Matrix B = Matrix::Zero(n * m, m);
        B.bottomRows(m) = Matrix::Identity(m, m);
        // x_i[k] = u[k - (n - i)]  ->  C block i carries tap n - i
        Matrix C = Matrix::Zero(p, n * m);
        for (int i = 0; i < n; ++i)
            C.middleCols(i * m, m) = taps[static_cast<size_t>(n - i)];
        return StateSpaceModel::discrete(A, B, C, taps[0], period);
    }

    /// Tap-wise convolution: (this * rhs)(z) = this(z) rhs(z).
    FirFilter convolve(const FirFilter& rhs) const {
        if (inputs() != rhs.outputs())
            throw std::invalid_argument("FirFilter::convolve: width mismatch");
        std::vector<Matrix> out(taps.size() + rhs.taps.size() - 1,
                                Matrix::Zero(outputs(), rhs.inputs()));
        for (size_t i = 0; i < taps.size(); ++i)
            for (size_t j = 0; j < rhs.taps.size(); ++j)
                out[i + j] += taps[i] * rhs.taps[j];
        return {std::move(out), period};
    }

    FirFilter plus_identity() const {
        if (inputs() != outputs())
            throw std::invalid_argument("FirFilter::plus_identity: non-square taps");
        FirFilter out = *this;
        out.taps[0] += Matrix::Identity(outputs(), inputs());
        return out;
    }
};

/// Plain-text tap file: '#' header with dims and rate, then one line per tap,
/// row-major coefficients.
inline void write_tap_file(const FirFilter& f, std::ostream& os) {
    os << "# taps=" << f.taps.size() << " rows=" << f.outputs() << " cols=" << f.inputs()
       << " period=" << std::setprecision(17) << f.period << "\n";
    os << std::setprecision(17);
    for (size_t k = 0; k < f.taps.size(); ++k) {
        os << k;
        for (Eigen::Index i = 0; i < f.taps[k].rows(); ++i)
            for (Eigen::Index j = 0; j < f.taps[k].cols(); ++j)
                os << ' ' << f.taps[k](i, j);
        os << '\n';
    }
}

inline void write_tap_file(const FirFilter& f, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("write_tap_file: cannot open " + path);
    write_tap_file(f, os);
}

inline FirFilter read_tap_file(std::istream& is) {
    std::string line;
    size_t ntaps = 0, rows = 0, cols = 0;
    double period = 1.0;
    std::vector<Matrix> taps;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string kv;
            while (hs >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    continue;
                const std::string key = kv.substr(0, eq);
                const double val = std::stod(kv.substr(eq + 1));
                if (key == "taps") ntaps = static_cast<size_t>(val);
                else if (key == "rows") rows = static_cast<size_t>(val);
                else if (key == "cols") cols = static_cast<size_t>(val);
                else if (key == "period") period = val;
            }
            continue;
        }
        std::istringstream ls(line);
        size_t k;
        ls >> k;
        Matrix tap(rows, cols);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                if (!(ls >> tap(i, j)))
                    throw std::runtime_error("read_tap_file: truncated tap line");
        taps.push_back(tap);
    }
    if (taps.size() != ntaps)
        throw std::runtime_error("read_tap_file: tap count does not match header");
    return {std::move(taps), period};
}

inline FirFilter read_tap_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("read_tap_file: cannot open " + path);
    return read_tap_file(is);
}

}  // namespace liftsynth
