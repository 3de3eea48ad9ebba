#include "sgdlab/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sgdlab {

namespace {

double quartic_poly(double x) { return (x - 1.0) * (x - 2.0) * (x - 3.0) * (x - 4.0); }

double quartic_poly_deriv(double x) {
    return ((4.0 * x - 30.0) * x + 70.0) * x - 50.0;
}

double quartic_poly_second(double x) { return (12.0 * x - 60.0) * x + 70.0; }

// Bisection to machine precision; the bracket must change sign.
double bisect_root(double (*f)(double), double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Vec mean_center(const std::vector<Vec>& centers) {
    Vec mean = zeros(centers.front().size());
    for (const Vec& c : centers) {
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += c[j];
    }
    for (double& m : mean) m /= static_cast<double>(centers.size());
    return mean;
}

void check_dim(const Objective& obj, const Vec& theta) {
    if (static_cast<int>(theta.size()) != obj.dimension) {
        throw std::invalid_argument("theta dimension does not match objective '" + obj.id + "'");
    }
}

}  // namespace

Objective make_quad(double c, int dim) {
    if (!(c > 0.0)) throw std::invalid_argument("quad curvature must be positive");
    if (dim < 1) throw std::invalid_argument("quad dimension must be >= 1");
    Objective obj;
    obj.id = "quad";
    obj.dimension = dim;
    obj.eval = [c](const Vec& t) { return 0.5 * c * norm_sq(t); };
    obj.grad = [c](const Vec& t) {
        Vec g(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) g[j] = c * t[j];
        return g;
    };
    StationaryComponent comp;
    comp.kind = ComponentKind::point;
    comp.anchor = zeros(static_cast<std::size_t>(dim));
    comp.value = 0.0;
    comp.is_minimum = true;
    obj.stationary.components = {comp};
    obj.known_lipschitz = c;
    obj.known_local_pl = 2.0 * c;
    obj.infimum = 0.0;
    return obj;
}

Objective make_sin2() {
    Objective obj;
    obj.id = "sin2";
    obj.dimension = 1;
    obj.eval = [](const Vec& t) { const double s = std::sin(t[0]); return s * s; };
    obj.grad = [](const Vec& t) { return Vec{std::sin(2.0 * t[0])}; };
    const double pi = std::numbers::pi;
    StationaryComponent minima;
    minima.kind = ComponentKind::periodic_lattice;
    minima.anchor = {0.0};
    minima.period = pi;
    minima.value = 0.0;
    minima.is_minimum = true;
    StationaryComponent maxima;
    maxima.kind = ComponentKind::periodic_lattice;
    maxima.anchor = {0.5 * pi};
    maxima.period = pi;
    maxima.value = 1.0;
    maxima.is_minimum = false;
    obj.stationary.components = {minima, maxima};
    obj.known_lipschitz = 2.0;
    obj.known_local_pl = 4.0;
    obj.infimum = 0.0;
    return obj;
}

Objective make_cos2() {
    Objective obj;
    obj.id = "cos2";
    obj.dimension = 1;
    obj.eval = [](const Vec& t) { const double c = std::cos(t[0]); return c * c; };
    obj.grad = [](const Vec& t) { return Vec{-std::sin(2.0 * t[0])}; };
    const double pi = std::numbers::pi;
    StationaryComponent minima;
    minima.kind = ComponentKind::periodic_lattice;
    minima.anchor = {0.5 * pi};
    minima.period = pi;
    minima.value = 0.0;
    minima.is_minimum = true;
    StationaryComponent maxima;
    maxima.kind = ComponentKind::periodic_lattice;
    maxima.anchor = {0.0};
    maxima.period = pi;
    maxima.value = 1.0;
    maxima.is_minimum = false;
    obj.stationary.components = {minima, maxima};
    obj.known_lipschitz = 2.0;
    obj.known_local_pl = 4.0;
    obj.infimum = 0.0;
    return obj;
}

Objective make_quartic() {
    // Critical points of the product polynomial: the derivative is a cubic
    // with one root in each of (1,2), (2,3), (3,4).
    const double r1 = bisect_root(quartic_poly_deriv, 1.0, 2.0);
    const double r2 = bisect_root(quartic_poly_deriv, 2.0, 3.0);
    const double r3 = bisect_root(quartic_poly_deriv, 3.0, 4.0);
    const double raw_min = std::min(quartic_poly(r1), quartic_poly(r3));
    const double k0 = -raw_min;

    Objective obj;
    obj.id = "quartic";
    obj.dimension = 1;
    obj.eval = [k0](const Vec& t) { return quartic_poly(t[0]) + k0; };
    obj.grad = [](const Vec& t) { return Vec{quartic_poly_deriv(t[0])}; };
    auto point_comp = [k0](double x, bool is_min) {
        StationaryComponent c;
        c.kind = ComponentKind::point;
        c.anchor = {x};
        c.value = quartic_poly(x) + k0;
        c.is_minimum = is_min;
        return c;
    };
    obj.stationary.components = {point_comp(r1, true), point_comp(r2, false),
                                 point_comp(r3, true)};
    const double lo = obj.stationary.window_lo;
    const double hi = obj.stationary.window_hi;
    obj.known_lipschitz =
        std::max({std::abs(quartic_poly_second(lo)), std::abs(quartic_poly_second(hi)),
                  std::abs(quartic_poly_second(2.5))});
    obj.infimum = 0.0;
    return obj;
}

Objective make_finite_sum_quad(std::vector<Vec> centers) {
    if (centers.empty()) throw std::invalid_argument("finite_sum_quad needs >= 1 center");
    const std::size_t dim = centers.front().size();
    if (dim == 0) throw std::invalid_argument("finite_sum_quad centers must be nonempty vectors");
    for (const Vec& c : centers) {
        if (c.size() != dim) {
            throw std::invalid_argument("finite_sum_quad centers must share one dimension");
        }
        if (!all_finite(c)) throw std::invalid_argument("finite_sum_quad centers must be finite");
    }
    const Vec mean = mean_center(centers);
    const std::size_t m = centers.size();
    double spread = 0.0;
    for (const Vec& c : centers) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = c[j] - mean[j];
            spread += d * d;
        }
    }
    spread /= static_cast<double>(m);
    const double gmin = 0.5 * spread;

    Objective obj;
    obj.id = "finite_sum_quad";
    obj.dimension = static_cast<int>(dim);
    obj.eval = [centers, m](const Vec& t) {
        double total = 0.0;
        for (const Vec& c : centers) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < t.size(); ++j) {
                const double d = t[j] - c[j];
                d2 += d * d;
            }
            total += 0.5 * d2;
        }
        return total / static_cast<double>(m);
    };
    obj.grad = [mean](const Vec& t) {
        Vec g(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) g[j] = t[j] - mean[j];
        return g;
    };
    StationaryComponent comp;
    comp.kind = ComponentKind::point;
    comp.anchor = mean;
    comp.value = gmin;
    comp.is_minimum = true;
    obj.stationary.components = {comp};
    obj.known_lipschitz = 1.0;
    obj.known_local_pl = 2.0;
    obj.infimum = gmin;
    obj.finite_sum_centers = std::move(centers);
    return obj;
}

std::vector<Objective> catalog() {
    return {make_quad(1.0, 1), make_sin2(), make_cos2(), make_quartic(),
            make_finite_sum_quad({{-1.0}, {1.0}})};
}

bool inside_window(const Objective& obj, const Vec& theta) {
    for (double x : theta) {
        if (!(x >= obj.stationary.window_lo && x <= obj.stationary.window_hi)) return false;
    }
    return true;
}

double distance_to_component(const StationaryComponent& comp, const Vec& theta) {
    switch (comp.kind) {
        case ComponentKind::point: {
            double d2 = 0.0;
            for (std::size_t j = 0; j < theta.size(); ++j) {
                const double d = theta[j] - comp.anchor[j];
                d2 += d * d;
            }
            return std::sqrt(d2);
        }
        case ComponentKind::periodic_lattice:
            return std::abs(std::remainder(theta[0] - comp.anchor[0], comp.period));
        case ComponentKind::interval:
            throw std::logic_error("interval components are not instantiated by the catalog");
    }
    throw std::logic_error("unknown component kind");
}

int nearest_component(const Objective& obj, const Vec& theta) {
    check_dim(obj, theta);
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < obj.stationary.components.size(); ++i) {
        const double d = distance_to_component(obj.stationary.components[i], theta);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double distance_to_stationary_set_unchecked(const Objective& obj, const Vec& theta) {
    double best = std::numeric_limits<double>::infinity();
    for (const StationaryComponent& comp : obj.stationary.components) {
        best = std::min(best, distance_to_component(comp, theta));
    }
    return best;
}

double distance_to_stationary_set(const Objective& obj, const Vec& theta) {
    check_dim(obj, theta);
    if (!inside_window(obj, theta)) {
        throw std::domain_error("theta outside the metadata window of objective '" + obj.id +
                                "'");
    }
    return distance_to_stationary_set_unchecked(obj, theta);
}

double gradient_check(const Objective& obj, const std::vector<Vec>& points, double h) {
    if (!(h >= 1e-8 && h <= 1e-3)) {
        throw std::invalid_argument("gradient_check step h must lie in [1e-8, 1e-3]");
    }
    double worst = 0.0;
    for (const Vec& p : points) {
        check_dim(obj, p);
        const Vec analytic = obj.grad(p);
        Vec probe = p;
        for (std::size_t j = 0; j < p.size(); ++j) {
            probe[j] = p[j] + h;
            const double up = obj.eval(probe);
            probe[j] = p[j] - h;
            const double down = obj.eval(probe);
            probe[j] = p[j];
            const double central = (up - down) / (2.0 * h);
            const double err = std::abs(central - analytic[j]) / (1.0 + std::abs(analytic[j]));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

double local_pl_ratio(const Objective& obj, const Vec& theta) {
    check_dim(obj, theta);
    if (!inside_window(obj, theta)) {
        throw std::domain_error("theta outside the metadata window of objective '" + obj.id +
                                "'");
    }
    const int i = nearest_component(obj, theta);
    const StationaryComponent& comp = obj.stationary.components[static_cast<std::size_t>(i)];
    if (distance_to_component(comp, theta) == 0.0) {
        throw std::domain_error("theta lies on a stationary component");
    }
    const double denom = obj.eval(theta) - comp.value;
    if (denom == 0.0) throw std::domain_error("g(theta) equals the component value");
    return norm_sq(obj.grad(theta)) / denom;
}

}  // namespace sgdlab
