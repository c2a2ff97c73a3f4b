#pragma once

// The catalog of closed-form fields and combinators.
//
//   K(x)     = -|x-a|^-6                fundamental(a)
//   K_eps(x) = -(|x-a|^2 + eps)^-3      fundamental_smoothed(a, eps)
//   u0(x)    = max{ c(-|x-a|^-6 + R^-6), -1 },  c = 1/(r^-6 - R^-6)
//                                       extremal_ball(a, r, R, delta)
//
// plus barriers, cutoffs and the OPSH-preserving combinators (sums with
// nonnegative weights, regularized and exact maxima).

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "octo/field.hpp"

namespace octo {

namespace fmt {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string point(const Point& p) {
    int last = -1;
    for (int i = 0; i < kVars; ++i)
        if (p[i] != 0.0) last = i;
    if (last < 0) return "origin";
    std::string s = "[";
    for (int i = 0; i <= last; ++i) {
        if (i) s += ' ';
        s += num(p[i]);
    }
    return s + "]";
}

} // namespace fmt

namespace nodes {

template <class T>
T sqdist(const OPoint<T>& x, const Point& a) {
    if constexpr (is_jet_v<T>) {
        if (x.seeded) {
            using R = real_of_t<T>;
            T j;
            for (int i = 0; i < kVars; ++i) {
                const R d = x[i].v - static_cast<R>(a[i]);
                j.v += d * d;
                j.g[i] = R(2) * d;
                j.h[detail::kTables.h[i][i]] = R(2);
            }
            return j;
        }
    }
    T s = (x[0] - lift<T>(a[0])) * (x[0] - lift<T>(a[0]));
    for (int i = 1; i < kVars; ++i) {
        const T d = x[i] - lift<T>(a[i]);
        s += d * d;
    }
    return s;
}

class Const : public NodeBase<Const> {
public:
    explicit Const(double c) : c_(c) {}
    template <class T>
    T evaluate(const OPoint<T>&) const {
        return lift<T>(c_);
    }

private:
    double c_;
};

/// c0 + w . x
class Affine : public NodeBase<Affine> {
public:
    Affine(double c0, const Point& w) : c0_(c0), w_(w) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        if constexpr (is_jet_v<T>) {
            if (x.seeded) {
                using R = real_of_t<T>;
                T j(static_cast<R>(c0_));
                for (int i = 0; i < kVars; ++i) {
                    j.v += static_cast<R>(w_[i]) * x[i].v;
                    j.g[i] = static_cast<R>(w_[i]);
                }
                return j;
            }
        }
        T s = lift<T>(c0_);
        for (int i = 0; i < kVars; ++i)
            if (w_[i] != 0.0) s += x[i] * static_cast<real_of_t<T>>(w_[i]);
        return s;
    }

private:
    double c0_;
    Point w_;
};

class SqDist : public NodeBase<SqDist> {
public:
    explicit SqDist(const Point& a) : a_(a) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        return sqdist(x, a_);
    }

private:
    Point a_;
};

class Fundamental : public NodeBase<Fundamental> {
public:
    explicit Fundamental(const Point& a) : a_(a) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        const T s = sqdist(x, a_);
        if (value(s) == 0) throw DomainError("catalog", "fundamental solution evaluated at its pole");
        return -ipow(s, -3);
    }

private:
    Point a_;
};

class FundamentalSmoothed : public NodeBase<FundamentalSmoothed> {
public:
    FundamentalSmoothed(const Point& a, double eps) : a_(a), eps_(eps) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        return -ipow(sqdist(x, a_) + lift<T>(eps_), -3);
    }

private:
    Point a_;
    double eps_;
};

/// (1 - |x-c|^2/r^2)_+^4, a C^3 cutoff supported in the closed ball B(c, r).
class Bump : public NodeBase<Bump> {
public:
    Bump(const Point& c, double r) : c_(c), r_(r) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        const T t = lift<T>(1.0) - sqdist(x, c_) * static_cast<real_of_t<T>>(1.0 / (r_ * r_));
        if (!(value(t) > 0)) return lift<T>(0.0);
        return ipow(t, 4);
    }

private:
    Point c_;
    double r_;
};

class Add : public NodeBase<Add> {
public:
    Add(NodePtr f, NodePtr g) : f_(std::move(f)), g_(std::move(g)) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        return f_->eval(x) + g_->eval(x);
    }

private:
    NodePtr f_, g_;
};

class Mul : public NodeBase<Mul> {
public:
    Mul(NodePtr f, NodePtr g) : f_(std::move(f)), g_(std::move(g)) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        return f_->eval(x) * g_->eval(x);
    }

private:
    NodePtr f_, g_;
};

/// s f + c
class ScaleShift : public NodeBase<ScaleShift> {
public:
    ScaleShift(NodePtr f, double s, double c) : f_(std::move(f)), s_(s), c_(c) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        using R = real_of_t<T>;
        return f_->eval(x) * static_cast<R>(s_) + static_cast<R>(c_);
    }

private:
    NodePtr f_;
    double s_, c_;
};

class Pow : public NodeBase<Pow> {
public:
    Pow(NodePtr f, double k) : f_(std::move(f)), k_(k) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        const T v = f_->eval(x);
        if (!(value(v) > 0)) throw DomainError("catalog", "real power of a non-positive value");
        return rpow(v, k_);
    }

private:
    NodePtr f_;
    double k_;
};

class IPow : public NodeBase<IPow> {
public:
    IPow(NodePtr f, int n) : f_(std::move(f)), n_(n) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        const T v = f_->eval(x);
        if (n_ < 0 && value(v) == 0) throw DomainError("catalog", "negative power of zero");
        return ipow(v, n_);
    }

private:
    NodePtr f_;
    int n_;
};

/// m_delta(s, t) = (s + t + sqrt((s-t)^2 + delta^2)) / 2.  With delta = 0 the
/// exact max is returned and jets follow the larger branch.
class SmoothMax : public NodeBase<SmoothMax> {
public:
    SmoothMax(NodePtr f, NodePtr g, double delta) : f_(std::move(f)), g_(std::move(g)), delta_(delta) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        using R = real_of_t<T>;
        const T s = f_->eval(x);
        const T t = g_->eval(x);
        if (delta_ == 0.0) return value(s) >= value(t) ? s : t;
        const T d = s - t;
        return (s + t + sqrt_(d * d + static_cast<R>(delta_ * delta_))) * R(0.5);
    }

private:
    NodePtr f_, g_;
    double delta_;
};

/// Exact maximum of a list; jets follow the active branch.
class MaxN : public NodeBase<MaxN> {
public:
    explicit MaxN(std::vector<NodePtr> fs) : fs_(std::move(fs)) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        T best = fs_.front()->eval(x);
        for (std::size_t i = 1; i < fs_.size(); ++i) {
            T v = fs_[i]->eval(x);
            if (value(v) > value(best)) best = std::move(v);
        }
        return best;
    }

private:
    std::vector<NodePtr> fs_;
};

/// tau log( (1/M) sum exp(f_j / tau) ): a smooth minorant of max_j f_j, within
/// tau log M of it.
class LseN : public NodeBase<LseN> {
public:
    LseN(std::vector<NodePtr> fs, double tau) : fs_(std::move(fs)), tau_(tau) {}
    template <class T>
    T evaluate(const OPoint<T>& x) const {
        using R = real_of_t<T>;
        std::vector<T> v;
        v.reserve(fs_.size());
        R m = R(-INFINITY);
        for (const auto& f : fs_) {
            v.push_back(f->eval(x));
            if (value(v.back()) > m) m = value(v.back());
        }
        const R inv_tau = R(1) / static_cast<R>(tau_);
        T sum = lift<T>(0.0);
        for (const auto& vi : v) sum += exp_((vi - m) * inv_tau);
        return log_(sum * (R(1) / static_cast<R>(fs_.size()))) * static_cast<R>(tau_) + m;
    }

private:
    std::vector<NodePtr> fs_;
    double tau_;
};

} // namespace nodes

// ---- constructors -----------------------------------------------------------

inline ScalarField constant(double c) {
    return {std::make_shared<nodes::Const>(c), "const " + fmt::num(c), true};
}

/// c0 + w . x (a Re-linear form plus a constant).
inline ScalarField affine(double c0, const Point& w) {
    return {std::make_shared<nodes::Affine>(c0, w), "affine " + fmt::num(c0) + " " + fmt::point(w), true};
}

/// The coordinate x_i (i = 8*slot + basis index).
inline ScalarField coord(int i) {
    if (i < 0 || i >= kVars) throw DomainError("catalog", "coordinate index out of range");
    Point w;
    w[i] = 1.0;
    return {std::make_shared<nodes::Affine>(0.0, w), "coord " + std::to_string(i), true};
}

inline ScalarField sq_dist(const Point& a) {
    return {std::make_shared<nodes::SqDist>(a), "sqdist " + fmt::point(a), true};
}

inline ScalarField sq_norm() { return {std::make_shared<nodes::SqDist>(Point{}), "sqnorm", true}; }

inline ScalarField fundamental(const Point& a) {
    return {std::make_shared<nodes::Fundamental>(a), "fundamental " + fmt::point(a), true, {a}};
}

inline ScalarField fundamental_smoothed(const Point& a, double eps) {
    if (!(eps > 0)) throw DomainError("catalog", "smoothing parameter must be positive");
    return {std::make_shared<nodes::FundamentalSmoothed>(a, eps),
            "fundamental_smoothed " + fmt::point(a) + " " + fmt::num(eps), true};
}

inline ScalarField bump(const Point& c, double r) {
    if (!(r > 0)) throw DomainError("catalog", "bump radius must be positive");
    return {std::make_shared<nodes::Bump>(c, r), "bump " + fmt::point(c) + " " + fmt::num(r), false};
}

inline ScalarField add(const ScalarField& f, const ScalarField& g) {
    return {std::make_shared<nodes::Add>(f.node(), g.node()), "add " + f.text() + " " + g.text(),
            f.opsh() && g.opsh(), merge_singular(f, g), f.smooth() && g.smooth()};
}

inline ScalarField mul(const ScalarField& f, const ScalarField& g) {
    return {std::make_shared<nodes::Mul>(f.node(), g.node()), "mul " + f.text() + " " + g.text(), false,
            merge_singular(f, g), f.smooth() && g.smooth()};
}

/// s f + c; keeps the OPSH flag when s >= 0.
inline ScalarField scale_shift(const ScalarField& f, double s, double c) {
    return {std::make_shared<nodes::ScaleShift>(f.node(), s, c),
            "scale_shift " + f.text() + " " + fmt::num(s) + " " + fmt::num(c), f.opsh() && s >= 0, f.singular(),
            f.smooth()};
}

inline ScalarField pow(const ScalarField& f, double k) {
    return {std::make_shared<nodes::Pow>(f.node(), k), "pow " + f.text() + " " + fmt::num(k), false, f.singular(),
            f.smooth()};
}

inline ScalarField ipow(const ScalarField& f, int n) {
    return {std::make_shared<nodes::IPow>(f.node(), n), "ipow " + f.text() + " " + std::to_string(n), false,
            f.singular(), f.smooth()};
}

/// Regularized max (s + t + sqrt((s-t)^2 + delta^2))/2; delta = 0 is the exact max.
inline ScalarField smooth_max(const ScalarField& f, const ScalarField& g, double delta) {
    if (delta < 0) throw DomainError("catalog", "negative max regularization");
    return {std::make_shared<nodes::SmoothMax>(f.node(), g.node(), delta),
            "smooth_max " + f.text() + " " + g.text() + " " + fmt::num(delta), f.opsh() && g.opsh(),
            merge_singular(f, g), delta > 0 && f.smooth() && g.smooth()};
}

inline ScalarField max_of(const std::vector<ScalarField>& fs) {
    if (fs.empty()) throw DomainError("catalog", "max of an empty list");
    std::vector<NodePtr> nodes;
    std::vector<Point> sing;
    bool opsh = true;
    std::string text = "maxn " + std::to_string(fs.size());
    for (const auto& f : fs) {
        nodes.push_back(f.node());
        sing.insert(sing.end(), f.singular().begin(), f.singular().end());
        opsh = opsh && f.opsh();
        text += " " + f.text();
    }
    return {std::make_shared<nodes::MaxN>(std::move(nodes)), text, opsh, sing, fs.size() == 1 && fs[0].smooth()};
}

/// Smoothed maximum tau log((1/M) sum exp(f_j/tau)), which lies in
/// [max_j f_j - tau log M, max_j f_j].
inline ScalarField lse_of(const std::vector<ScalarField>& fs, double tau) {
    if (fs.empty()) throw DomainError("catalog", "max of an empty list");
    if (!(tau > 0)) throw DomainError("catalog", "lse temperature must be positive");
    std::vector<NodePtr> nodes;
    std::vector<Point> sing;
    bool opsh = true, smooth = true;
    std::string text = "lsen " + std::to_string(fs.size()) + " " + fmt::num(tau);
    for (const auto& f : fs) {
        nodes.push_back(f.node());
        sing.insert(sing.end(), f.singular().begin(), f.singular().end());
        opsh = opsh && f.opsh();
        smooth = smooth && f.smooth();
        text += " " + f.text();
    }
    return {std::make_shared<nodes::LseN>(std::move(nodes), tau), text, opsh, sing, smooth};
}

/// Relative extremal function of B(a, r) in B(a, R), regularized with
/// parameter delta (exact for delta = 0).
inline ScalarField extremal_ball(const Point& a, double r, double R, double delta) {
    if (!(r > 0) || !(r < R)) throw DomainError("catalog", "extremal_ball needs 0 < r < R");
    if (delta < 0) throw DomainError("catalog", "negative max regularization");
    const double c = 1.0 / (std::pow(r, -6) - std::pow(R, -6));
    const ScalarField k = scale_shift(fundamental(a), c, c * std::pow(R, -6));
    ScalarField f = smooth_max(k, constant(-1.0), delta);
    return {f.node(), "extremal " + fmt::point(a) + " " + fmt::num(r) + " " + fmt::num(R) + " " + fmt::num(delta),
            true, {a}, delta > 0};
}

/// v(x) = phi0 + grad . (x - x0) - 2C (1 - Re(x . conj(x0))) for a boundary point x0.
inline ScalarField barrier(const Point& x0, double phi0, const Point& grad, double C) {
    if (std::fabs(norm(x0) - 1.0) > 1e-9) throw DomainError("catalog", "barrier foot must lie on the unit sphere");
    if (C < 0) throw DomainError("catalog", "barrier constant must be nonnegative");
    // Re(x . conj(x0)) summed over both slots is the Euclidean product x . x0.
    const double c0 = phi0 - dot(grad, x0) - 2.0 * C;
    const Point w = grad + x0 * (2.0 * C);
    return {std::make_shared<nodes::Affine>(c0, w),
            "barrier " + fmt::point(x0) + " " + fmt::num(phi0) + " " + fmt::point(grad) + " " + fmt::num(C), true};
}

/// rho = (|x|^2 - 1)/2, the defining function of the unit ball.
inline ScalarField defining_rho() {
    const ScalarField f = scale_shift(sq_norm(), 0.5, -0.5);
    return {f.node(), "rho", true};
}

/// 9(|x|^2 - 5/9), equal to 4 on the unit sphere.
inline ScalarField shell_pusher() {
    const ScalarField f = scale_shift(sq_norm(), 9.0, -5.0);
    return {f.node(), "shell_pusher", true};
}

/// 2(|x|^2 - 3/4).
inline ScalarField quadratic_pusher() {
    const ScalarField f = scale_shift(sq_norm(), 2.0, -1.5);
    return {f.node(), "quadratic_pusher", true};
}

} // namespace octo
