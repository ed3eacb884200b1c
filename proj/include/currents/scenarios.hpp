#pragma once

#include <currents/chains.hpp>

#include <map>
#include <string>
#include <vector>

namespace currents {

/// Arc half-gap 2 pi eps / (1 + 2 eps) of the example1 curve: the arcs leave out
/// the angles within this value of the inner poles.
double example1_gap_angle(double eps);
/// Closed-form length 4 pi / (1 + 2 eps) + 2 (6 - 2 cos a) of the curve.
double example1_length(double eps);
/// Point of the four-piece parametrisation, t in [0, 4].
Point example1_point(double eps, double t);

/// Throws TooFewSegments.
Chain gen_circle(const Point& center, double radius, int segments, int orientation = 1);

/// Closed polyline sampling every piece with `segments_per_piece` edges. Throws EpsOutOfRange, TooFewSegments.
Chain gen_example1_curve(double eps, int segments_per_piece);

/// Two counterclockwise unit circles centred at (-3, 0) and (3, 0).
Chain gen_two_circles(int segments);

///
/// Surface of revolution of the profile t in [1/2, 5/2] about the x-axis:
/// two near-spheres joined by a tube of radius sin a. Profile nodes are
/// graded geometrically (factor 1.2) towards the tube junctions.
/// Throws EpsOutOfRange, TooFewSegments.
///
Chain gen_dumbbell(double eps, int azimuthal, int axial);

/// Profile of the dumbbell, (x, r) for t in [1/2, 5/2].
Eigen::Vector2d dumbbell_profile(double eps, double t);

/// Icosphere with outward orientation. Throws InvalidArgument unless 0 <= subdivisions <= 6.
Chain gen_sphere(const Point& center, double radius, int subdivisions);

/// Unit spheres centred at (-3, 0, 0) and (3, 0, 0).
Chain gen_two_spheres(int subdivisions);

/// A triangle chain together with a tagged vertex subset.
struct TaggedChain {
    Chain chain;
    std::vector<Index> tagged_vertices;
};

///
/// (0, L)^2 minus the closed quarter disc of radius R0 at the origin, meshed
/// along rays at `resolution` angular steps (rounded up to even) with
/// logarithmic radial spacing. Arc vertices are tagged. Throws BadRadius.
///
TaggedChain gen_omega_L(double L, double R0, int resolution);

///
/// [0,1]^2 minus discs of radius R0 at 2^-i Z^2, assembled from mirrored
/// copies of the Omega_L tile with L = 2^(-i-1). Throws HolesOverlap, TooFewSegments.
///
Chain gen_swiss_cheese(int level, double R0, int hole_segments = 32);

/// Default hole radius 2^(-5i/2).
double swiss_cheese_radius(int level);

/// Unit square, resolution^2 cells each split along the same diagonal.
Chain gen_square(int resolution);

/// Host complex [0, length] x [0, height] with `resolution` cells along the length.
ComplexPtr gen_strip(double length, double height, int resolution);

/// Annulus host: `rings` + 1 concentric `segments`-gons between the radii.
ComplexPtr gen_annulus(double r_inner, double r_outer, int segments, int rings);

/// Chain along the polyline through the given host vertices, in order.
Chain chain_on_path(const ComplexPtr& host, const std::vector<int>& path, double multiplicity = 1.0);

struct PoincareReport {
    double ratio = 0.0; // 1 / mu, mu the first mixed eigenvalue
    double bound = 0.0; // 2 sqrt(2) L^3 / (3 R0)
    bool holds = false; // ratio <= 1.05 bound
};

/// Dirichlet on the tagged arc, natural elsewhere.
PoincareReport poincare_check(const TaggedChain& omega, double L, double R0);

struct ScenarioSpec {
    std::string name;
    std::map<std::string, double> params;
    int resolution = 0;
};

/// Names accepted by `generate_scenario`.
const std::vector<std::string>& scenario_names();

/// Minimum resolution per scenario.
int minimum_resolution(const std::string& name);

///
/// Builds the named scenario. Missing parameters take the documented
/// defaults. Throws InvalidArgument for unknown names or low resolution.
///
Chain generate_scenario(const ScenarioSpec& spec);

} // namespace currents
