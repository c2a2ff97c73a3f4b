#pragma once

// Monte-Carlo and randomized quasi-Monte-Carlo integration over balls,
// spheres and shells in R^8 and R^16, and walk-on-spheres for harmonic
// measure of the unit ball.
//
// Samples are processed in fixed-size chunks.  Chunk k draws from
// Stream(seed, k), and chunk statistics are merged in chunk order, so the
// result does not depend on how chunks are scheduled across threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "octo/errors.hpp"
#include "octo/hermitian.hpp"
#include "octo/point.hpp"
#include "octo/random.hpp"

namespace octo {

/// Volume of the unit ball in R^n.
inline double ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

/// Surface area of the unit sphere S^{n-1} in R^n.
inline double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

enum class Region { Ball, Sphere, Shell, LineDisc };
enum class Method { MC, QMC };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::Ball: return "ball";
        case Region::Sphere: return "sphere";
        case Region::Shell: return "shell";
        case Region::LineDisc: return "line-disc";
    }
    return "?";
}
inline const char* to_string(Method m) { return m == Method::MC ? "mc" : "qmc"; }

inline constexpr std::size_t kDefaultSamples = 200000;
inline constexpr std::size_t kMinSamples = 1000;
inline constexpr int kQmcReplicates = 16;

/// Region ball/sphere use r_out as the radius; shell uses [r_in, r_out].
/// LineDisc is the 8-dimensional disc |t| <= r_out (dim is forced to 8).
struct QuadratureSpec {
    Region region = Region::Ball;
    int dim = 16;
    Point center{};
    double r_in = 0.0;
    double r_out = 1.0;
    std::size_t samples = kDefaultSamples;
    std::uint64_t seed = 1;
    Method method = Method::MC;

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        os << to_string(region) << " dim=" << dim << " r_in=" << r_in << " r_out=" << r_out << " n=" << samples
           << " seed=" << seed << " " << to_string(method);
        return os.str();
    }
};

struct QuadratureEstimate {
    double value = 0;
    double stderr_ = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

inline QuadratureEstimate operator-(const QuadratureEstimate& a, const QuadratureEstimate& b) {
    return {a.value - b.value, std::hypot(a.stderr_, b.stderr_), a.samples + b.samples, a.seed};
}
inline QuadratureEstimate operator+(const QuadratureEstimate& a, const QuadratureEstimate& b) {
    return {a.value + b.value, std::hypot(a.stderr_, b.stderr_), a.samples + b.samples, a.seed};
}

/// Several integrals estimated on shared samples, with their covariance.
struct MultiEstimate {
    std::vector<QuadratureEstimate> est;
    std::vector<double> cov;  // row-major K x K covariance of the estimates

    [[nodiscard]] std::size_t size() const { return est.size(); }
    const QuadratureEstimate& operator[](std::size_t i) const { return est[i]; }
    [[nodiscard]] double covariance(std::size_t i, std::size_t j) const { return cov[i * est.size() + j]; }

    /// sum_i c_i I_i with its standard error (covariance included).
    [[nodiscard]] QuadratureEstimate combine(const std::vector<double>& c) const {
        QuadratureEstimate r;
        double var = 0;
        for (std::size_t i = 0; i < est.size(); ++i) {
            r.value += c[i] * est[i].value;
            for (std::size_t j = 0; j < est.size(); ++j) var += c[i] * c[j] * covariance(i, j);
        }
        r.stderr_ = std::sqrt(std::max(var, 0.0));
        r.samples = est.empty() ? 0 : est[0].samples;
        r.seed = est.empty() ? 0 : est[0].seed;
        return r;
    }
};

namespace detail {

inline constexpr std::size_t kChunk = 4096;

/// Running mean and co-moment matrix of K outputs, mergeable in a fixed order.
struct Moments {
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> m2;  // K x K

    explicit Moments(std::size_t k = 0) : mean(k, 0.0), m2(k * k, 0.0) {}

    void add(std::span<const double> v) {
        const std::size_t k = mean.size();
        ++n;
        std::array<double, 8> d{};
        for (std::size_t i = 0; i < k; ++i) {
            d[i] = v[i] - mean[i];
            mean[i] += d[i] / static_cast<double>(n);
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m2[i * k + j] += d[i] * (v[j] - mean[j]);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const std::size_t k = mean.size();
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
        std::array<double, 8> d{};
        for (std::size_t i = 0; i < k; ++i) d[i] = o.mean[i] - mean[i];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m2[i * k + j] += o.m2[i * k + j] + d[i] * d[j] * na * nb / nt;
        for (std::size_t i = 0; i < k; ++i) mean[i] += d[i] * nb / nt;
        n += o.n;
    }
};

/// Run `body(chunk_index, moments)` over chunks on a few threads and merge in order.
inline Moments run_chunks(std::size_t nchunks, std::size_t k, const std::function<void(std::size_t, Moments&)>& body) {
    std::vector<Moments> parts(nchunks, Moments(k));
    std::vector<std::exception_ptr> errors(nchunks);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(hw, nchunks));
    auto work = [&](unsigned tid) {
        for (std::size_t c = tid; c < nchunks; c += nthreads) {
            try {
                body(c, parts[c]);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    if (nthreads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    Moments total(k);
    for (const auto& p : parts) total.merge(p);
    return total;
}

template <int Dim>
struct SamplePoint {
    std::array<double, Dim> y;
};

/// Map Dim+1 uniforms (Dim for the direction, one for the radius) to a point
/// of the region, relative to its center.
template <int Dim>
std::array<double, Dim> map_to_region(const QuadratureSpec& s, const double* u_dir, double u_rad, bool gaussian_given) {
    std::array<double, Dim> g{};
    double n2 = 0;
    for (int i = 0; i < Dim; ++i) {
        g[i] = gaussian_given ? u_dir[i] : normal_quantile(u_dir[i]);
        n2 += g[i] * g[i];
    }
    if (n2 == 0) {
        g[0] = 1;
        n2 = 1;
    }
    double rho = s.r_out;
    const double N = Dim;
    switch (s.region) {
        case Region::Ball:
        case Region::LineDisc: rho = s.r_out * std::pow(u_rad, 1.0 / N); break;
        case Region::Sphere: rho = s.r_out; break;
        case Region::Shell: {
            const double a = std::pow(s.r_in, N), b = std::pow(s.r_out, N);
            rho = std::pow(a + u_rad * (b - a), 1.0 / N);
            break;
        }
    }
    const double scale = rho / std::sqrt(n2);
    for (auto& v : g) v *= scale;
    return g;
}

template <int Dim>
double region_measure(const QuadratureSpec& s) {
    switch (s.region) {
        case Region::Ball:
        case Region::LineDisc: return ball_volume(Dim) * std::pow(s.r_out, Dim);
        case Region::Sphere: return sphere_area(Dim) * std::pow(s.r_out, Dim - 1);
        case Region::Shell: return ball_volume(Dim) * (std::pow(s.r_out, Dim) - std::pow(s.r_in, Dim));
    }
    return 0;
}

inline void validate(const QuadratureSpec& s) {
    if (s.samples < kMinSamples) throw DomainError("quadrature", "at least 1000 samples are required");
    if (!(s.r_out > 0) || s.r_in < 0 || (s.region == Region::Shell && !(s.r_in < s.r_out)))
        throw DomainError("quadrature", "radii must satisfy 0 <= r_in < r_out");
    if (s.dim != 8 && s.dim != 16) throw DomainError("quadrature", "dimension must be 8 or 16");
}

template <int Dim>
std::string format_point(const std::array<double, Dim>& y) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (int i = 0; i < Dim; ++i) os << (i ? " " : "") << y[i];
    os << ']';
    return os.str();
}

template <int Dim, class F>
MultiEstimate integrate_dim(const QuadratureSpec& s, std::size_t k, F&& f) {
    validate(s);
    if (k == 0 || k > 8) throw DomainError("quadrature", "between 1 and 8 integrands are supported");
    std::array<double, Dim> center{};
    for (int i = 0; i < Dim; ++i) center[i] = s.center[i];
    const double measure = region_measure<Dim>(s);

    auto eval_at = [&](const std::array<double, Dim>& rel, double* out) {
        std::array<double, Dim> y;
        for (int i = 0; i < Dim; ++i) y[i] = center[i] + rel[i];
        f(y, out);
        for (std::size_t i = 0; i < k; ++i)
            if (!std::isfinite(out[i]))
                throw DomainError("quadrature", "non-finite integrand at " + format_point<Dim>(y));
    };

    MultiEstimate result;
    result.est.resize(k);
    result.cov.assign(k * k, 0.0);

    if (s.method == Method::MC) {
        const std::size_t nchunks = (s.samples + kChunk - 1) / kChunk;
        const Moments m = run_chunks(nchunks, k, [&](std::size_t c, Moments& acc) {
            Stream rng(s.seed, c);
            const std::size_t begin = c * kChunk, end = std::min(s.samples, begin + kChunk);
            std::array<double, Dim> g{};
            std::array<double, 8> out{};
            for (std::size_t i = begin; i < end; ++i) {
                for (int d = 0; d < Dim; ++d) g[d] = rng.normal();
                const double ur = rng.uniform_open0();
                eval_at(map_to_region<Dim>(s, g.data(), ur, true), out.data());
                acc.add(std::span<const double>(out.data(), k));
            }
        });
        const double n = static_cast<double>(m.n);
        for (std::size_t i = 0; i < k; ++i) {
            result.est[i] = {measure * m.mean[i], measure * std::sqrt(std::max(m.m2[i * k + i], 0.0) / (n - 1) / n),
                             s.samples, s.seed};
            for (std::size_t j = 0; j < k; ++j) result.cov[i * k + j] = measure * measure * m.m2[i * k + j] / (n - 1) / n;
        }
        return result;
    }

    // Randomized QMC: kQmcReplicates independently shifted Halton point sets.
    const std::size_t per = s.samples / kQmcReplicates;
    Moments reps(k);
    for (int r = 0; r < kQmcReplicates; ++r) {
        Stream rng(s.seed, 0x9000000ULL + static_cast<std::uint64_t>(r));
        std::array<double, Dim + 1> shift{};
        for (auto& v : shift) v = rng.uniform();
        const std::size_t nchunks = (per + kChunk - 1) / kChunk;
        const Moments m = run_chunks(nchunks, k, [&](std::size_t c, Moments& acc) {
            const std::size_t begin = c * kChunk, end = std::min(per, begin + kChunk);
            std::array<double, 8> out{};
            for (std::size_t i = begin; i < end; ++i) {
                const auto u = halton<Dim + 1>(i + 1, &shift);
                // radius from the first coordinate (the best-distributed one)
                eval_at(map_to_region<Dim>(s, u.data() + 1, std::max(u[0], 1e-300), false), out.data());
                acc.add(std::span<const double>(out.data(), k));
            }
        });
        std::array<double, 8> mv{};
        for (std::size_t i = 0; i < k; ++i) mv[i] = m.mean[i];
        reps.add(std::span<const double>(mv.data(), k));
    }
    const double R = kQmcReplicates;
    for (std::size_t i = 0; i < k; ++i) {
        result.est[i] = {measure * reps.mean[i], measure * std::sqrt(std::max(reps.m2[i * k + i], 0.0) / (R - 1) / R),
                         per * kQmcReplicates, s.seed};
        for (std::size_t j = 0; j < k; ++j) result.cov[i * k + j] = measure * measure * reps.m2[i * k + j] / (R - 1) / R;
    }
    return result;
}

} // namespace detail

/// Integrate k functions of a point of O^2 over a 16-dimensional region.
/// `f(const Point&, double* out)` writes k values.
template <class F>
MultiEstimate integrate_multi(const QuadratureSpec& spec, std::size_t k, F&& f) {
    if (spec.dim != 16 || spec.region == Region::LineDisc)
        throw DomainError("quadrature", "integrate_multi works on 16-dimensional regions");
    return detail::integrate_dim<16>(spec, k, [&](const std::array<double, 16>& y, double* out) { f(point_from(y), out); });
}

template <class F>
QuadratureEstimate integrate(const QuadratureSpec& spec, F&& f) {
    return integrate_multi(spec, 1, [&](const Point& x, double* out) { out[0] = f(x); }).est[0];
}

/// 8-dimensional integration; `f` receives an octonion.
template <class F>
QuadratureEstimate integrate8(QuadratureSpec spec, F&& f) {
    spec.dim = 8;
    return detail::integrate_dim<8>(spec, 1, [&](const std::array<double, 8>& y, double* out) {
               Oct t;
               for (int i = 0; i < 8; ++i) t.c[i] = y[i];
               out[0] = f(t);
           }).est[0];
}

/// Uniform random point of the ball B(0, radius) in R^16.
inline Point random_ball_point(Stream& rng, double radius = 1.0) {
    std::array<double, 16> g{};
    for (auto& v : g) v = rng.normal();
    QuadratureSpec s;
    s.r_out = radius;
    return point_from(detail::map_to_region<16>(s, g.data(), rng.uniform_open0(), true));
}

/// Uniform random point of the sphere of given radius in R^16.
inline Point random_sphere_point(Stream& rng, double radius = 1.0) {
    Point p;
    double n2 = 0;
    do {
        n2 = 0;
        for (int i = 0; i < 16; ++i) {
            p[i] = rng.normal();
            n2 += p[i] * p[i];
        }
    } while (n2 == 0);
    return p * (radius / std::sqrt(n2));
}

inline Oct random_octonion(Stream& rng) {
    Oct o;
    for (auto& v : o.c) v = rng.normal();
    return o;
}

/// Quasi-random points of the closed ball B(0, radius), deterministic in `seed`.
inline std::vector<Point> qmc_ball_points(std::size_t count, double radius, std::uint64_t seed) {
    Stream rng(seed, 0xb411);
    std::array<double, 17> shift{};
    for (auto& v : shift) v = rng.uniform();
    QuadratureSpec s;
    s.r_out = radius;
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto u = halton<17>(i + 1, &shift);
        out.push_back(point_from(detail::map_to_region<16>(s, u.data() + 1, std::max(u[0], 1e-300), false)));
    }
    return out;
}

/// Quasi-random points of the sphere of given radius.
inline std::vector<Point> qmc_sphere_points(std::size_t count, double radius, std::uint64_t seed) {
    Stream rng(seed, 0x5fe4);
    std::array<double, 16> shift{};
    for (auto& v : shift) v = rng.uniform();
    QuadratureSpec s;
    s.region = Region::Sphere;
    s.r_out = radius;
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto u = halton<16>(i + 1, &shift);
        out.push_back(point_from(detail::map_to_region<16>(s, u.data(), 1.0, false)));
    }
    return out;
}

/// Parameters of an affine octonionic line {a + b t : t in O}.
struct LineParams {
    Point a;
    OVec b;  // b.v1 is real, |b1|^2 + |b2|^2 = 1
};

/// `count` lines with base point uniform in the unit ball and direction
/// (b1, b2) uniform on the unit sphere of R x O.
inline std::vector<LineParams> sample_lines(std::size_t count, std::uint64_t seed) {
    if (count < 1) throw DomainError("quadrature", "sample_lines needs count >= 1");
    std::vector<LineParams> out;
    out.reserve(count);
    Stream rng(seed, 0x11e5);
    for (std::size_t i = 0; i < count; ++i) {
        LineParams L;
        L.a = random_ball_point(rng, 1.0);
        std::array<double, 9> g{};
        double n2 = 0;
        do {
            n2 = 0;
            for (auto& v : g) {
                v = rng.normal();
                n2 += v * v;
            }
        } while (n2 == 0);
        const double s = 1.0 / std::sqrt(n2);
        L.b.v1 = Oct(g[0] * s);
        for (int p = 0; p < 8; ++p) L.b.v2.c[p] = g[1 + p] * s;
        out.push_back(L);
    }
    return out;
}

/// The point a + b t of the line (b t taken slotwise: (b1 t, b2 t)).
inline Point line_point(const LineParams& L, const Oct& t) {
    Point x = L.a;
    x.x1 += L.b.v1 * t;
    x.x2 += L.b.v2 * t;
    return x;
}

/// Harmonic measure of the unit ball in R^16 seen from x, sampled by
/// walk-on-spheres: E[phi(X_exit)] with the walk stopped within `stop` of the
/// sphere and projected onto it (bias at most stop times the Lipschitz
/// constant of phi).
template <class Phi>
QuadratureEstimate harmonic_measure_wos(const Point& x, Phi&& phi, std::size_t samples, std::uint64_t seed,
                                        double stop = 1e-4) {
    if (!(norm(x) < 1.0)) throw DomainError("perron", "harmonic extension requested outside the open ball");
    if (samples < 2) throw DomainError("quadrature", "walk-on-spheres needs at least two walks");
    const std::size_t nchunks = (samples + detail::kChunk - 1) / detail::kChunk;
    const detail::Moments m = detail::run_chunks(nchunks, 1, [&](std::size_t c, detail::Moments& acc) {
        Stream rng(seed, 0x3a1c0000ULL + c);
        const std::size_t begin = c * detail::kChunk, end = std::min(samples, begin + detail::kChunk);
        for (std::size_t i = begin; i < end; ++i) {
            Point y = x;
            for (int step = 0; step < 100000; ++step) {
                const double d = 1.0 - norm(y);
                if (d < stop) break;
                y = y + random_sphere_point(rng, d);
            }
            const double ny = norm(y);
            const Point z = y * (1.0 / ny);
            const double v = phi(z);
            if (!std::isfinite(v)) throw DomainError("quadrature", "non-finite boundary value");
            acc.add(std::span<const double>(&v, 1));
        }
    });
    const double n = static_cast<double>(m.n);
    return {m.mean[0], std::sqrt(std::max(m.m2[0], 0.0) / (n - 1) / n), samples, seed};
}

/// Poisson-kernel estimate of the harmonic extension at x: the spherical mean
/// of phi(zeta) (1 - |x|^2) / |x - zeta|^16.
template <class Phi>
QuadratureEstimate poisson_integral(const Point& x, Phi&& phi, std::size_t samples, std::uint64_t seed) {
    if (!(norm(x) < 1.0)) throw DomainError("perron", "harmonic extension requested outside the open ball");
    QuadratureSpec s;
    s.region = Region::Sphere;
    s.samples = samples;
    s.seed = seed;
    const double area = sphere_area(16);
    const double nx2 = norm2(x);
    QuadratureEstimate e = integrate(s, [&](const Point& z) {
        const double d2 = norm2(x - z);
        return phi(z) * (1.0 - nx2) / std::pow(d2, 8) / area;
    });
    return e;
}

} // namespace octo
