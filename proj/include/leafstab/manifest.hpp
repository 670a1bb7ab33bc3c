#pragma once

// Line-oriented manifest files:
//
//   # comment
//   [chart]
//   base = x1 x2
//   fiber = y1
//   params = eps
//
//   [bivector pi]
//   x1 x2 = 1 + y1          coefficient of ∂x1∧∂x2
//
//   [triple T]
//   vertical: y1 y2 = y3
//   connection: x1 y1 = eps  Γ_1 along ∂y1
//   horizontal: x1 x2 = 1 + y1
//
//   [section s]    y1 = x1^2
//   [cochain c]    x1 | y1 = x2          dx1 ⊗ ∂y1
//   [lie_algebra g]  basis = e1 e2,  e1 e2 = e1
//   [ring R]       betti = 1 0 2,  sigma = 1 0,  cup0 = 1 ; 0,  coboundaries = 1 ; 1
//   [family F]     name = torus-epsilon,  eps = 1/10
//   [grid G]       n1 = 32,  n2 = 32

#include <map>
#include <string>

#include "leafstab/cohomology.hpp"
#include "leafstab/leaf.hpp"
#include "leafstab/section.hpp"

namespace leafstab {

struct FamilySpec {
  std::string name;
  std::map<std::string, Rational> params;
};

struct Manifest {
  ChartPtr chart;
  std::map<std::string, Multivector> bivectors;
  std::map<std::string, GeometricTriple> triples;
  std::map<std::string, Section> sections;
  std::map<std::string, GradedSum> cochains;
  std::map<std::string, LieAlgebraData> lie_algebras;
  std::map<std::string, GradedRingModel> rings;
  std::map<std::string, FamilySpec> families;
  std::map<std::string, leaf::Grid> grids;
  std::string source;
};

/// Throws ManifestError.
Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::string& path);

/// Parses a rational literal such as "-3/4".
Rational parse_rational(const std::string& text);

}  // namespace leafstab
