#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgdlab/vec.hpp"

namespace sgdlab {

enum class ComponentKind { point, periodic_lattice, interval };

// One piece of the stationary set {theta : grad g(theta) = 0}. A
// periodic_lattice stands for the 1-D family {anchor + k*period}.
struct StationaryComponent {
    ComponentKind kind = ComponentKind::point;
    Vec anchor;
    double period = 0.0;
    double value = 0.0;
    bool is_minimum = true;
};

struct StationarySetInfo {
    std::vector<StationaryComponent> components;
    // Metadata (distances, constants) is certified only inside
    // [window_lo, window_hi]^N.
    double window_lo = -10.0;
    double window_hi = 10.0;
};

struct Objective {
    std::string id;
    int dimension = 1;
    std::function<double(const Vec&)> eval;
    std::function<Vec(const Vec&)> grad;
    StationarySetInfo stationary;
    std::optional<double> known_lipschitz;
    std::optional<double> known_local_pl;
    double infimum = 0.0;
    // Nonempty only for finite-sum losses; component i is
    // (1/2)|theta - centers[i]|^2.
    std::vector<Vec> finite_sum_centers;
};

Objective make_quad(double c, int dim = 1);
Objective make_sin2();
Objective make_cos2();
// Shifted product (x-1)(x-2)(x-3)(x-4) + k0; k0 is found by root-finding
// on the derivative so the minimum value is 0 to within 1e-9.
Objective make_quartic();
Objective make_finite_sum_quad(std::vector<Vec> centers);

std::vector<Objective> catalog();

bool inside_window(const Objective& obj, const Vec& theta);

double distance_to_component(const StationaryComponent& comp, const Vec& theta);

// Index of the nearest stationary component; equidistant ties resolve to
// the smaller index.
int nearest_component(const Objective& obj, const Vec& theta);

// Throws std::domain_error outside the metadata window.
double distance_to_stationary_set(const Objective& obj, const Vec& theta);

// Same formula without the window check; used by trajectory recording,
// where iterates may briefly leave the window before the divergence guard
// fires.
double distance_to_stationary_set_unchecked(const Objective& obj, const Vec& theta);

// Max over points and coordinates of
// |central difference - analytic| / (1 + |analytic|), h in [1e-8, 1e-3].
double gradient_check(const Objective& obj, const std::vector<Vec>& points, double h);

// |grad g(theta)|^2 / (g(theta) - g_i) for the nearest component i.
// Signed; throws std::domain_error on a component or outside the window.
double local_pl_ratio(const Objective& obj, const Vec& theta);

}  // namespace sgdlab
