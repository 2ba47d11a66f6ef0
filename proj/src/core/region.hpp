#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "spectral.hpp"

namespace densilab {

namespace detail {
struct RegionNode;
}

// Measurable subset of R^d: a total membership predicate plus the descriptor
// it was built from. Cheap to copy; nodes are immutable and shared.
class Region {
 public:
  int dim() const;
  bool contains(std::span<const double> x) const;
  bool contains(const Vec& x) const { return contains(std::span<const double>(x.data(), x.size())); }

  // Half side of an origin-centred cube containing the region, if bounded.
  std::optional<double> bounding_half_width() const;

  const detail::RegionNode& node() const { return *node_; }
  std::string kind() const;

  static Region all_space(int dim);
  static Region ball(int dim, double r);
  static Region cube(int dim, double r);
  // {|x_l| >= |x_i|^alpha}; in d > 2 the remaining coordinates are free.
  static Region ealpha(int dim, double alpha, int i = 0, int l = 1);
  // {y + z : y in U1, z in U1^perp, ||z|| < delta ||y||}; columns of u1
  // are an orthonormal basis of U1.
  static Region gdelta(double delta, const Mat& u1);
  // {u + v + w : ||v|| < delta ||u||}, u in U, v in V, w in (U + V)^perp.
  static Region fdelta(double delta, const Mat& u, const Mat& v);
  // Closed cone {u + v + w : ||v|| <= kappa ||u||}, 0 < kappa < 1.
  static Region cone(double kappa, const Mat& u, const Mat& v);
  // Y + F with F given in coordinates of an orthonormal basis of Y^perp.
  // When `complement_basis` is empty it is completed from the canonical
  // basis, so coordinate axes stay coordinate axes.
  static Region cylinder(const Region& base, const Mat& axis, const Mat& complement_basis = Mat());
  static Region complement(const Region& r);
  static Region translate(const Region& r, const Vec& offset);
  // {x : m x in r}.
  static Region preimage(const Region& r, const Mat& m);
  static Region intersection(const Region& a, const Region& b);

 private:
  explicit Region(std::shared_ptr<const detail::RegionNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::RegionNode> node_;
};

namespace shape {
struct AllSpace {};
struct Ball { double r; };
struct Cube { double r; };
struct EAlpha { double alpha; int i; int l; };
struct GDelta { double delta; Mat u1; };
struct FDelta { double delta; Mat u; Mat v; };
struct Cone { double kappa; Mat u; Mat v; };
struct Cylinder { Region base; Mat axis; Mat complement_basis; };
struct Complement { Region inner; };
struct Translate { Region inner; Vec offset; };
struct Preimage { Region inner; Mat map; };
struct Intersection { Region lhs; Region rhs; };
}  // namespace shape

using RegionShape = std::variant<shape::AllSpace, shape::Ball, shape::Cube, shape::EAlpha,
                                 shape::GDelta, shape::FDelta, shape::Cone, shape::Cylinder,
                                 shape::Complement, shape::Translate, shape::Preimage,
                                 shape::Intersection>;

namespace detail {
struct RegionNode {
  int dim;
  RegionShape shape;
};
}  // namespace detail

// Orthonormal completion of `axis` drawn from the canonical basis in order.
Mat orthogonal_complement(const Mat& axis, int dim);

}  // namespace densilab
