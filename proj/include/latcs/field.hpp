#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "latcs/box.hpp"

namespace latcs {

/// Real-valued function on the closure of a box: interior values first,
/// boundary values after, in the index order defined by LatticeBox.
/// Boundary values are stored explicitly rather than implied to be zero, so
/// Dirichlet data other than zero works through the same type.
class LatticeFunction {
public:
    explicit LatticeFunction(BoxPtr domain, double fill = 0.0)
        : domain_(std::move(domain)),
          values_(static_cast<std::size_t>(domain_->closure_size()), fill) {}

    LatticeFunction(BoxPtr domain, std::vector<double> values)
        : domain_(std::move(domain)), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != domain_->closure_size())
            throw DomainError("value vector does not match domain closure");
    }

    const BoxPtr& domain_ptr() const noexcept { return domain_; }
    const LatticeBox& domain() const noexcept { return *domain_; }

    double operator()(const Point& p) const { return values_[static_cast<std::size_t>(domain_->closure_index(p))]; }
    double& operator()(const Point& p) { return values_[static_cast<std::size_t>(domain_->closure_index(p))]; }

    double operator[](std::int64_t closure_idx) const noexcept { return values_[static_cast<std::size_t>(closure_idx)]; }
    double& operator[](std::int64_t closure_idx) noexcept { return values_[static_cast<std::size_t>(closure_idx)]; }

    std::span<double> interior() noexcept { return {values_.data(), static_cast<std::size_t>(domain_->interior_size())}; }
    std::span<const double> interior() const noexcept {
        return {values_.data(), static_cast<std::size_t>(domain_->interior_size())};
    }
    std::span<double> boundary_values() noexcept {
        return {values_.data() + domain_->interior_size(), static_cast<std::size_t>(domain_->boundary_size())};
    }
    std::span<const double> boundary_values() const noexcept {
        return {values_.data() + domain_->interior_size(), static_cast<std::size_t>(domain_->boundary_size())};
    }
    std::span<const double> closure_values() const noexcept { return values_; }

    double sup_norm() const noexcept {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    double interior_sup_norm() const noexcept {
        double m = 0.0;
        for (double v : interior()) m = std::max(m, std::abs(v));
        return m;
    }

    bool same_domain(const LatticeFunction& other) const noexcept {
        return domain_ == other.domain_ || *domain_ == *other.domain_;
    }

private:
    BoxPtr domain_;
    std::vector<double> values_;
};

/// The pair (u, v) of fields sharing one domain.
struct FieldPair {
    LatticeFunction u;
    LatticeFunction v;

    FieldPair(LatticeFunction u_, LatticeFunction v_) : u(std::move(u_)), v(std::move(v_)) {
        if (!u.same_domain(v)) throw DomainError("field pair must share a domain");
    }

    static FieldPair zeros(const BoxPtr& domain) {
        return FieldPair(LatticeFunction(domain), LatticeFunction(domain));
    }

    const BoxPtr& domain_ptr() const noexcept { return u.domain_ptr(); }
    const LatticeBox& domain() const noexcept { return u.domain(); }
};

} // namespace latcs
