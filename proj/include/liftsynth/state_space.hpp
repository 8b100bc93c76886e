#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftsynth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class TimeDomain { Continuous, Discrete };

/// Dense state-space model x+ = Ax + Bu, y = Cx + Du.
///
/// Continuous models carry no sampling period; discrete models carry h > 0.
/// Models are plain values: copy freely, never mutate in place.
struct StateSpaceModel {
    Matrix A, B, C, D;
    TimeDomain domain = TimeDomain::Discrete;
    double h = 0.0;

    StateSpaceModel() = default;

    StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d, TimeDomain dom, double period)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)),
          domain(dom), h(period) {
        if (A.rows() != A.cols())
            throw std::invalid_argument("StateSpaceModel: A must be square");
        if (B.rows() != A.rows() || C.cols() != A.cols() ||
            D.rows() != C.rows() || D.cols() != B.cols())
            throw std::invalid_argument("StateSpaceModel: inconsistent dimensions");
        if (domain == TimeDomain::Discrete && !(h > 0.0))
            throw std::invalid_argument("StateSpaceModel: discrete model needs h > 0");
        if (domain == TimeDomain::Continuous)
            h = 0.0;
    }

    static StateSpaceModel continuous(Matrix a, Matrix b, Matrix c, Matrix d) {
        return {std::move(a), std::move(b), std::move(c), std::move(d),
                TimeDomain::Continuous, 0.0};
    }

    static StateSpaceModel discrete(Matrix a, Matrix b, Matrix c, Matrix d, double period) {
        return {std::move(a), std::move(b), std::move(c), std::move(d),
                TimeDomain::Discrete, period};
    }

    /// Static gain (n = 0) system.
    static StateSpaceModel gain(const Matrix& d, TimeDomain dom, double period) {
        return {Matrix::Zero(0, 0), Matrix::Zero(0, d.cols()),
                Matrix::Zero(d.rows(), 0), d, dom, period};
    }

    static StateSpaceModel identity(Eigen::Index width, double period) {
        return gain(Matrix::Identity(width, width), TimeDomain::Discrete, period);
    }

    Eigen::Index states() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }

    bool is_discrete() const { return domain == TimeDomain::Discrete; }

    /// Pointwise transfer function D + C (lambda I - A)^{-1} B.
    ComplexMatrix eval(std::complex<double> lambda) const {
        if (states() == 0)
            return D.cast<std::complex<double>>();
        ComplexMatrix resolvent =
            (lambda * ComplexMatrix::Identity(states(), states()) - A.cast<std::complex<double>>())
                .partialPivLu()
                .solve(B.cast<std::complex<double>>());
        return C.cast<std::complex<double>>() * resolvent + D.cast<std::complex<double>>();
    }
};

/// Rational transfer function, coefficients in descending powers of s or z.
struct TransferFunction {
    std::vector<double> num;
    std::vector<double> den;
    enum class Variable { s, z } var = Variable::z;

    TransferFunction() = default;
    TransferFunction(std::vector<double> n, std::vector<double> d, Variable v)
        : num(std::move(n)), den(std::move(d)), var(v) {
        strip_leading_zeros(num);
        strip_leading_zeros(den);
        if (den.empty() || den.front() == 0.0)
            throw std::invalid_argument("TransferFunction: zero leading denominator coefficient");
        if (num.empty())
            num = {0.0};
    }

    bool proper() const { return num.size() <= den.size(); }
    bool strictly_proper() const { return num.size() < den.size(); }

    std::complex<double> eval(std::complex<double> x) const {
        return polyval(num, x) / polyval(den, x);
    }

    static std::complex<double> polyval(const std::vector<double>& c, std::complex<double> x) {
        std::complex<double> acc = 0.0;
        for (double ck : c) acc = acc * x + ck;
        return acc;
    }

  private:
    static void strip_leading_zeros(std::vector<double>& c) {
        size_t i = 0;
        while (i + 1 < c.size() && c[i] == 0.0) ++i;
        c.erase(c.begin(), c.begin() + static_cast<long>(i));
    }
};

/// Spectral radius r(A), the maximum absolute value of the eigenvalues.
inline double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("spectral_radius: matrix must be square");
    if (m.rows() == 0)
        return 0.0;
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_radius: eigenvalue iteration failed to converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool is_schur(const Matrix& m, double tol = 1e-9) {
    return spectral_radius(m) < 1.0 - tol;
}

inline bool is_schur(const StateSpaceModel& sys, double tol = 1e-9) {
    return is_schur(sys.A, tol);
}

/// Controllable canonical realization of a proper transfer function.
inline StateSpaceModel tf_to_ss(const TransferFunction& tf, double period = 0.0) {
    if (!tf.proper())
        throw std::invalid_argument(
            "tf_to_ss: improper transfer function (deg num " +
            std::to_string(tf.num.size() - 1) + " > deg den " +
            std::to_string(tf.den.size() - 1) + ")");
    const auto domain =
        tf.var == TransferFunction::Variable::s ? TimeDomain::Continuous : TimeDomain::Discrete;
    if (domain == TimeDomain::Discrete && !(period > 0.0))
        throw std::invalid_argument("tf_to_ss: discrete transfer function needs a period");

    // Normalize to monic denominator and zero-pad the numerator.
    const size_t n = tf.den.size() - 1;
    std::vector<double> den(tf.den);
    std::vector<double> num(n + 1, 0.0);
    const double lead = den[0];
    for (auto& d : den) d /= lead;
    std::copy(tf.num.rbegin(), tf.num.rend(), num.rbegin());
    for (auto& c : num) c /= lead;

    if (n == 0)
        return StateSpaceModel::gain(Matrix::Constant(1, 1, num[0]), domain, period);

    Matrix A = Matrix::Zero(n, n);
    for (size_t i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
    for (size_t j = 0; j < n; ++j) A(n - 1, j) = -den[n - j];
    Matrix B = Matrix::Zero(n, 1);
    B(n - 1, 0) = 1.0;
    // y = b0 u + sum (b_i - b0 a_i) x_i with b0 the direct term
    const double b0 = num[0];
    Matrix C = Matrix::Zero(1, n);
    for (size_t j = 0; j < n; ++j) C(0, j) = num[n - j] - b0 * den[n - j];
    Matrix D = Matrix::Constant(1, 1, b0);
    return {A, B, C, D, domain, period};
}

/// ZOH discretization via the augmented (n+m) matrix exponential:
/// Ad = e^{Ah}, Bd = int_0^h e^{At} B dt.
inline StateSpaceModel c2d_zoh(const StateSpaceModel& sys, double period) {
    if (sys.domain != TimeDomain::Continuous)
        throw std::invalid_argument("c2d_zoh: input must be continuous-time");
    if (!(period > 0.0))
        throw std::invalid_argument("c2d_zoh: h must be positive");
    const auto n = sys.states();
    const auto m = sys.inputs();
    Matrix aug = Matrix::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = sys.A;
    aug.topRightCorner(n, m) = sys.B;
    Matrix e = (aug * period).exp();
    return StateSpaceModel::discrete(e.topLeftCorner(n, n), e.topRightCorner(n, m),
                                     sys.C, sys.D, period);
}

namespace detail {
inline void require_same_domain(const StateSpaceModel& g1, const StateSpaceModel& g2,
                                const char* op) {
    if (g1.domain != g2.domain)
        throw std::invalid_argument(std::string(op) + ": mixed time domains");
    if (g1.is_discrete() && std::abs(g1.h - g2.h) > 1e-12 * std::max(g1.h, g2.h))
        throw std::invalid_argument(std::string(op) + ": mismatched sampling periods");
}
}  // namespace detail

/// Series interconnection: the signal passes through `first`, then `second`.
inline StateSpaceModel connect_series(const StateSpaceModel& first,
                                      const StateSpaceModel& second) {
    detail::require_same_domain(first, second, "connect_series");
    if (second.inputs() != first.outputs())
        throw std::invalid_argument("connect_series: width mismatch");
    const auto n1 = first.states(), n2 = second.states();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = first.A;
    A.bottomLeftCorner(n2, n1) = second.B * first.C;
    A.bottomRightCorner(n2, n2) = second.A;
    Matrix B(n1 + n2, first.inputs());
    B.topRows(n1) = first.B;
    B.bottomRows(n2) = second.B * first.D;
    Matrix C(second.outputs(), n1 + n2);
    C.leftCols(n1) = second.D * first.C;
    C.rightCols(n2) = second.C;
    return {A, B, C, second.D * first.D, first.domain, first.h};
}

/// Parallel interconnection g1 + sign * g2.
inline StateSpaceModel connect_parallel(const StateSpaceModel& g1, const StateSpaceModel& g2,
                                        double sign = 1.0) {
    detail::require_same_domain(g1, g2, "connect_parallel");
    if (g1.inputs() != g2.inputs() || g1.outputs() != g2.outputs())
        throw std::invalid_argument("connect_parallel: width mismatch");
    const auto n1 = g1.states(), n2 = g2.states();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = g1.A;
    A.bottomRightCorner(n2, n2) = g2.A;
    Matrix B(n1 + n2, g1.inputs());
    B.topRows(n1) = g1.B;
    B.bottomRows(n2) = g2.B;
    Matrix C(g1.outputs(), n1 + n2);
    C.leftCols(n1) = g1.C;
    C.rightCols(n2) = sign * g2.C;
    return {A, B, C, g1.D + sign * g2.D, g1.domain, g1.h};
}

/// Pure m-step delay z^{-m} I acting on `width` channels.
inline StateSpaceModel delay_system(int steps, Eigen::Index width, double period) {
    if (steps < 0)
        throw std::invalid_argument("delay_system: negative delay");
    if (steps == 0)
        return StateSpaceModel::identity(width, period);
    const Eigen::Index n = steps * width;
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < steps; ++i)
        A.block((i + 1) * width, i * width, width, width) = Matrix::Identity(width, width);
    Matrix B = Matrix::Zero(n, width);
    B.topRows(width) = Matrix::Identity(width, width);
    Matrix C = Matrix::Zero(width, n);
    C.rightCols(width) = Matrix::Identity(width, width);
    return StateSpaceModel::discrete(A, B, C, Matrix::Zero(width, width), period);
}

/// Prepend z^{-m} to a discrete system (m shift states per input channel).
inline StateSpaceModel augment_delay(const StateSpaceModel& sys, int steps) {
    if (!sys.is_discrete())
        throw std::invalid_argument("augment_delay: system must be discrete");
    return connect_series(delay_system(steps, sys.inputs(), sys.h), sys);
}

/// Realization of (1 + K1)^{-1} for square discrete K1 (the DPCM sensitivity S_d).
///
/// Requires I + D invertible and the resulting state matrix Schur; an unstable
/// inverse is rejected with its spectral radius in the message.
inline StateSpaceModel feedback_inverse_unity(const StateSpaceModel& k1) {
    if (!k1.is_discrete())
        throw std::invalid_argument("feedback_inverse_unity: K1 must be discrete");
    if (k1.inputs() != k1.outputs())
        throw std::invalid_argument("feedback_inverse_unity: K1 must be square");
    const auto m = k1.inputs();
    Matrix ipd = Matrix::Identity(m, m) + k1.D;
    Eigen::FullPivLU<Matrix> lu(ipd);
    if (!lu.isInvertible())
        throw std::invalid_argument("feedback_inverse_unity: I + D_K1 is singular");
    Matrix ipd_inv = lu.inverse();
    Matrix A = k1.A - k1.B * ipd_inv * k1.C;
    const double r = spectral_radius(A);
    if (r >= 1.0 - 1e-9)
        throw std::runtime_error("feedback_inverse_unity: unstable inverse, spectral radius " +
                                 std::to_string(r));
    return StateSpaceModel::discrete(A, k1.B * ipd_inv, -ipd_inv * k1.C, ipd_inv, k1.h);
}

}  // namespace liftsynth
