#pragma once

// Central tolerance table. Every geometric predicate in the library reads
// from here; tests pin behavior against these exact values.
namespace chords::tol {

inline constexpr double kUnitVector = 1e-12;   // |u|-1 allowed for direction inputs
inline constexpr double kOrthogonal = 1e-12;   // rotation-matrix orthogonality defect
inline constexpr double kMembership = 1e-10;   // point-in-body slack (relative to scale)
inline constexpr double kDegeneracy = 1e-14;   // volumes below this are degenerate
inline constexpr double kRay = 1e-12;          // ray/halfspace denominator cutoff
inline constexpr double kGridMass = 1e-10;     // relative defect of total grid weight
inline constexpr double kAntipodal = 1e-10;    // antipodal weight mismatch (relative)
inline constexpr double kBoundaryRho = 1e-12;  // radial values below this count as zero
inline constexpr double kMvee = 1e-8;          // enclosing-ellipsoid stopping tolerance
inline constexpr int kMveeMaxIter = 500;       // enclosing-ellipsoid iteration cap

}  // namespace chords::tol
