#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "latcs/field.hpp"

namespace latcs {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Which of the two coupled fields a vortex (or a source term) belongs to.
enum class Side { U, V };

struct Vortex {
    Point site;
    double mass; // multiplicity; integer for physical data, fractional via the diagnostic hook
};

/// Vortex locations and multiplicities for both sides of the system.
///
/// Construction merges repeated sites by adding multiplicities and drops
/// entries whose merged multiplicity is zero, so the stored lists are
/// duplicate-free, sorted and strictly positive.
class VortexConfig {
public:
    VortexConfig(int dim, const std::vector<std::pair<Point, int>>& u_side,
                 const std::vector<std::pair<Point, int>>& v_side)
        : dim_(dim) {
        check_dim();
        u_ = merge(u_side);
        v_ = merge(v_side);
    }

    /// Diagnostic variant with real multiplicities. Physical vortex numbers
    /// are integers; small fractional totals are useful to exercise regimes
    /// whose thresholds would otherwise be astronomically large.
    static VortexConfig fractional(int dim, const std::vector<std::pair<Point, double>>& u_side,
                                   const std::vector<std::pair<Point, double>>& v_side) {
        VortexConfig cfg(dim);
        cfg.u_ = cfg.merge(u_side);
        cfg.v_ = cfg.merge(v_side);
        return cfg;
    }

    int dim() const noexcept { return dim_; }

    const std::vector<Vortex>& vortices(Side s) const noexcept { return s == Side::U ? u_ : v_; }
    const std::vector<Vortex>& u_vortices() const noexcept { return u_; }
    const std::vector<Vortex>& v_vortices() const noexcept { return v_; }

    double multiplicity_total(Side s) const noexcept {
        double t = 0.0;
        for (const Vortex& v : vortices(s)) t += v.mass;
        return t;
    }

    /// B = 4*pi*(sum of all multiplicities over both sides).
    double total_mass() const noexcept {
        return kFourPi * (multiplicity_total(Side::U) + multiplicity_total(Side::V));
    }

    bool empty() const noexcept { return u_.empty() && v_.empty(); }

    bool all_inside(const LatticeBox& box) const noexcept {
        for (const Vortex& w : u_)
            if (!box.contains(w.site)) return false;
        for (const Vortex& w : v_)
            if (!box.contains(w.site)) return false;
        return true;
    }

    /// Integer centroid of all vortex sites; origin for the empty config.
    /// Used as the canonical center for exhausting boxes.
    Point centroid() const {
        Point c = Point::zero(dim_);
        std::int64_t count = static_cast<std::int64_t>(u_.size() + v_.size());
        if (count == 0) return c;
        for (int i = 0; i < dim_; ++i) {
            std::int64_t s = 0;
            for (const Vortex& w : u_) s += w.site[i];
            for (const Vortex& w : v_) s += w.site[i];
            // Round half up (not away from zero) so the centroid commutes
            // with integer translations.
            c[i] = static_cast<int>(std::floor(static_cast<double>(s) / static_cast<double>(count) + 0.5));
        }
        return c;
    }

    VortexConfig translated(const Point& t) const {
        VortexConfig out(dim_);
        out.u_ = u_;
        out.v_ = v_;
        for (Vortex& w : out.u_) w.site = w.site + t;
        for (Vortex& w : out.v_) w.site = w.site + t;
        return out;
    }

private:
    explicit VortexConfig(int dim) : dim_(dim) { check_dim(); }

    void check_dim() const {
        if (dim_ < 2 || dim_ > kMaxDim) throw DomainError("lattice dimension must be between 2 and 8");
    }

    template <typename Mult>
    std::vector<Vortex> merge(const std::vector<std::pair<Point, Mult>>& raw) const {
        std::map<Point, double> acc;
        for (const auto& [site, mult] : raw) {
            if (site.dim() != dim_) throw DomainError("vortex dimension mismatch");
            if (!(static_cast<double>(mult) >= 0.0))
                throw DomainError("vortex multiplicity must be nonnegative");
            acc[site] += static_cast<double>(mult);
        }
        std::vector<Vortex> out;
        out.reserve(acc.size());
        for (const auto& [site, mass] : acc)
            if (mass > 0.0) out.push_back(Vortex{site, mass});
        return out;
    }

    int dim_;
    std::vector<Vortex> u_; // sorted by site, merged, mass > 0
    std::vector<Vortex> v_;
};

/// Dirac-comb source for one side on a box: 4*pi*m_j at each vortex site
/// inside the box, zero everywhere else (boundary included).
inline LatticeFunction source_field(const VortexConfig& cfg, Side side, const BoxPtr& domain) {
    LatticeFunction g(domain);
    for (const Vortex& w : cfg.vortices(side))
        if (domain->contains(w.site)) g(w.site) += kFourPi * w.mass;
    return g;
}

/// The large-coupling threshold 2B(2n + e^{4B}) in log space.
struct ThresholdInfo {
    double log_value;   // ln(2B) + ln(2n + e^{4B}); -inf when B = 0
    double value;       // exp(log_value), +inf when not representable
    bool value_finite;  // whether `value` fits in a double
    bool vacuous;       // B = 0: every positive coupling clears the threshold
};

inline ThresholdInfo lambda_threshold(const VortexConfig& cfg, int n) {
    if (n < 2) throw DomainError("lattice dimension must be at least 2");
    const double B = cfg.total_mass();
    ThresholdInfo info{};
    if (B == 0.0) {
        info.log_value = -std::numeric_limits<double>::infinity();
        info.value = 0.0;
        info.value_finite = true;
        info.vacuous = true;
        return info;
    }
    // ln(2n + e^{4B}) via log-sum-exp so huge B stays finite in log space.
    const double a = std::log(2.0 * n);
    const double b = 4.0 * B;
    const double hi = std::max(a, b);
    const double lse = hi + std::log1p(std::exp(std::min(a, b) - hi));
    info.log_value = std::log(2.0 * B) + lse;
    info.vacuous = false;
    if (info.log_value < std::log(std::numeric_limits<double>::max())) {
        info.value = std::exp(info.log_value);
        info.value_finite = true;
    } else {
        info.value = std::numeric_limits<double>::infinity();
        info.value_finite = false;
    }
    return info;
}

} // namespace latcs
