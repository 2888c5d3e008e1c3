#pragma once

#include <stdexcept>
#include <string>

namespace hill {

/// Input violates a documented precondition (bad flag value, |G| > L, ...).
/// The CLI maps these to exit code 2.
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed (integrator underflow, Newton divergence,
/// singular Jacobian, collision guard, ...).  The CLI maps these to exit code 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Trajectory entered the collision guard radius around the origin.
struct collision_error : numerical_error {
    explicit collision_error(const std::string& what) : numerical_error(what) {}
};

/// Newton iteration diverged (residual growing repeatedly).
struct divergence_error : numerical_error {
    explicit divergence_error(const std::string& what) : numerical_error(what) {}
};

/// Shooting Jacobian lost rank (typically at a bifurcation).
struct singular_jacobian_error : numerical_error {
    explicit singular_jacobian_error(const std::string& what) : numerical_error(what) {}
};

}  // namespace hill
