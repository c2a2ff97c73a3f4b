#pragma once

// Closed-form scalar fields on O^2.
//
// A field is an immutable expression tree.  Each node implements a single
// template `evaluate<T>(const OPoint<T>&)`; the virtual interface instantiates
// it for plain reals and for second/third-order jets in double and quad
// precision, so one expression yields values and exact derivatives.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "octo/errors.hpp"
#include "octo/jet.hpp"
#include "octo/point.hpp"

namespace octo {

using Jet2d = Jet<double, 2>;
using Jet3d = Jet<double, 3>;
using Jet2q = Jet<quad, 2>;
using Jet3q = Jet<quad, 3>;

class FieldNode {
public:
    virtual ~FieldNode() = default;
    virtual double eval(const OPoint<double>& x) const = 0;
    virtual quad eval(const OPoint<quad>& x) const = 0;
    virtual Jet2d eval(const OPoint<Jet2d>& x) const = 0;
    virtual Jet3d eval(const OPoint<Jet3d>& x) const = 0;
    virtual Jet2q eval(const OPoint<Jet2q>& x) const = 0;
    virtual Jet3q eval(const OPoint<Jet3q>& x) const = 0;
};

template <class Derived>
class NodeBase : public FieldNode {
public:
    double eval(const OPoint<double>& x) const override { return self().evaluate(x); }
    quad eval(const OPoint<quad>& x) const override { return self().evaluate(x); }
    Jet2d eval(const OPoint<Jet2d>& x) const override { return self().evaluate(x); }
    Jet3d eval(const OPoint<Jet3d>& x) const override { return self().evaluate(x); }
    Jet2q eval(const OPoint<Jet2q>& x) const override { return self().evaluate(x); }
    Jet3q eval(const OPoint<Jet3q>& x) const override { return self().evaluate(x); }

private:
    const Derived& self() const { return static_cast<const Derived&>(*this); }
};

using NodePtr = std::shared_ptr<const FieldNode>;

class ScalarField {
public:
    ScalarField() = default;
    ScalarField(NodePtr node, std::string text, bool opsh, std::vector<Point> singular = {}, bool smooth = true)
        : node_(std::move(node)), text_(std::move(text)), opsh_(opsh), smooth_(smooth), singular_(std::move(singular)) {}

    double operator()(const Point& x) const { return node_->eval(x); }

    template <class T>
    T eval(const OPoint<T>& x) const {
        return node_->eval(x);
    }

    [[nodiscard]] Jet2d jet2(const Point& x) const { return node_->eval(seed<Jet2d>(x)); }
    [[nodiscard]] Jet3d jet3(const Point& x) const { return node_->eval(seed<Jet3d>(x)); }
    [[nodiscard]] Jet2q jet2q(const Point& x) const { return node_->eval(seed<Jet2q>(to_real_point<quad>(x))); }
    [[nodiscard]] Jet3q jet3q(const Point& x) const { return node_->eval(seed<Jet3q>(to_real_point<quad>(x))); }

    /// Prefix text form; parse_field(text()) rebuilds an equivalent field.
    [[nodiscard]] const std::string& text() const { return text_; }
    /// Declared plurisubharmonic.  The flag is a claim checked by the test suite.
    [[nodiscard]] bool opsh() const { return opsh_; }
    /// False when the expression contains an exact (non-smooth) max.
    [[nodiscard]] bool smooth() const { return smooth_; }
    [[nodiscard]] const std::vector<Point>& singular() const { return singular_; }
    [[nodiscard]] const NodePtr& node() const { return node_; }
    [[nodiscard]] explicit operator bool() const { return static_cast<bool>(node_); }

    /// Distance from x to the declared singular set (infinity when empty).
    [[nodiscard]] double singular_distance(const Point& x) const {
        double d = INFINITY;
        for (const auto& s : singular_) d = std::min(d, norm(x - s));
        return d;
    }

private:
    NodePtr node_;
    std::string text_;
    bool opsh_ = false;
    bool smooth_ = true;
    std::vector<Point> singular_;
};

inline std::vector<Point> merge_singular(const ScalarField& f, const ScalarField& g) {
    auto s = f.singular();
    s.insert(s.end(), g.singular().begin(), g.singular().end());
    return s;
}

} // namespace octo
