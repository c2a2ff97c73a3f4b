#pragma once

// Prefix text format for catalog fields (see README, "Field expressions").

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "octo/catalog.hpp"
#include "octo/errors.hpp"
#include "octo/geometry.hpp"

namespace octo {

namespace detail {

class FieldParser {
public:
    explicit FieldParser(const std::string& text) {
        std::string spaced;
        for (char ch : text) {
            if (ch == '[' || ch == ']') {
                spaced += ' ';
                spaced += ch;
                spaced += ' ';
            } else if (ch == ',') {
                spaced += ' ';
            } else {
                spaced += ch;
            }
        }
        std::istringstream is(spaced);
        std::string tok;
        while (is >> tok) toks_.push_back(tok);
    }

    ScalarField parse_all() {
        ScalarField f = field();
        if (pos_ != toks_.size()) throw ParseError("trailing input at token '" + toks_[pos_] + "'");
        return f;
    }

    // Also reused by the CLI to read point arguments.
    Point point() {
        const std::string t = next("point");
        if (t == "origin" || t == "0") return Point{};
        if (t != "[") throw ParseError("expected a point, got '" + t + "'");
        Point p;
        int i = 0;
        for (;;) {
            const std::string v = next("point coordinate");
            if (v == "]") break;
            if (i >= kVars) throw ParseError("point has more than 16 coordinates");
            p[i++] = to_num(v);
        }
        return p;
    }

    [[nodiscard]] bool done() const { return pos_ == toks_.size(); }

private:
    std::vector<std::string> toks_;
    std::size_t pos_ = 0;

    std::string next(const char* what) {
        if (pos_ >= toks_.size()) throw ParseError(std::string("unexpected end of input, expected ") + what);
        return toks_[pos_++];
    }

    static double to_num(const std::string& s) {
        double v = 0;
        const auto* b = s.data();
        const auto* e = s.data() + s.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) throw ParseError("not a number: '" + s + "'");
        return v;
    }
    double num() { return to_num(next("number")); }
    int integer() {
        const std::string s = next("integer");
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("not an integer: '" + s + "'");
        return v;
    }

    ScalarField field() {
        const std::string op = next("field");
        if (op == "const") return constant(num());
        if (op == "coord") return coord(integer());
        if (op == "affine") {
            const double c0 = num();
            return affine(c0, point());
        }
        if (op == "sqnorm") return sq_norm();
        if (op == "sqdist") return sq_dist(point());
        if (op == "rho") return defining_rho();
        if (op == "shell_pusher") return shell_pusher();
        if (op == "quadratic_pusher") return quadratic_pusher();
        if (op == "fundamental") return fundamental(point());
        if (op == "fundamental_smoothed") {
            const Point a = point();
            return fundamental_smoothed(a, num());
        }
        if (op == "extremal") {
            const Point a = point();
            const double r = num(), R = num(), d = num();
            return extremal_ball(a, r, R, d);
        }
        if (op == "bump") {
            const Point c = point();
            return bump(c, num());
        }
        if (op == "barrier") {
            const Point x0 = point();
            const double phi0 = num();
            const Point g = point();
            return barrier(x0, phi0, g, num());
        }
        if (op == "add") {
            const ScalarField f = field();
            return add(f, field());
        }
        if (op == "mul") {
            const ScalarField f = field();
            return mul(f, field());
        }
        if (op == "scale_shift") {
            const ScalarField f = field();
            const double s = num();
            return scale_shift(f, s, num());
        }
        if (op == "pow") {
            const ScalarField f = field();
            return pow(f, num());
        }
        if (op == "ipow") {
            const ScalarField f = field();
            return ipow(f, integer());
        }
        if (op == "smooth_max") {
            const ScalarField f = field();
            const ScalarField g = field();
            return smooth_max(f, g, num());
        }
        if (op == "maxn") {
            const int n = integer();
            if (n < 1) throw ParseError("maxn needs at least one field");
            std::vector<ScalarField> fs;
            for (int i = 0; i < n; ++i) fs.push_back(field());
            return max_of(fs);
        }
        if (op == "lsen") {
            const int n = integer();
            if (n < 1) throw ParseError("lsen needs at least one field");
            const double tau = num();
            std::vector<ScalarField> fs;
            for (int i = 0; i < n; ++i) fs.push_back(field());
            return lse_of(fs, tau);
        }
        if (op == "pullback" || op == "pullback_inv") return parse_pullback(op == "pullback_inv");
        throw ParseError("unknown field '" + op + "'");
    }

    ScalarField parse_pullback(bool inverse) {
        const Point a = point();
        return weighted_pullback(a, field(), inverse);
    }
};

} // namespace detail

inline ScalarField parse_field(const std::string& text) { return detail::FieldParser(text).parse_all(); }

inline Point parse_point(const std::string& text) {
    detail::FieldParser p(text);
    const Point x = p.point();
    if (!p.done()) throw ParseError("trailing input after point");
    return x;
}

} // namespace octo
