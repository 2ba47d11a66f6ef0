#include "region.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace densilab {

namespace {

constexpr double kBasisTolerance = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::BadParameter, what);
}

void require_orthonormal(const Mat& basis, const std::string& name) {
  require(basis.rows() > 0, name + " must have at least one row");
  const Mat gram = basis.transpose() * basis;
  require((gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= kBasisTolerance ||
              basis.cols() == 0,
          name + " columns must be orthonormal");
}

// ||B^T x||^2 for a column-orthonormal B.
double projected_norm2(const Mat& basis, std::span<const double> x) {
  double total = 0.0;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    double dot = 0.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) dot += basis(r, c) * x[r];
    total += dot * dot;
  }
  return total;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

bool contains_impl(const detail::RegionNode& node, std::span<const double> x);

bool contains_shape(const shape::AllSpace&, std::span<const double>) { return true; }

bool contains_shape(const shape::Ball& b, std::span<const double> x) { return norm2(x) < b.r * b.r; }

bool contains_shape(const shape::Cube& c, std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return std::abs(v) < c.r; });
}

bool contains_shape(const shape::EAlpha& e, std::span<const double> x) {
  return std::abs(x[e.l]) >= std::pow(std::abs(x[e.i]), e.alpha);
}

bool contains_shape(const shape::GDelta& g, std::span<const double> x) {
  const double along = projected_norm2(g.u1, x);
  const double across = std::max(0.0, norm2(x) - along);
  return across < g.delta * g.delta * along;
}

bool contains_shape(const shape::FDelta& f, std::span<const double> x) {
  return projected_norm2(f.v, x) < f.delta * f.delta * projected_norm2(f.u, x);
}

bool contains_shape(const shape::Cone& c, std::span<const double> x) {
  return projected_norm2(c.v, x) <= c.kappa * c.kappa * projected_norm2(c.u, x);
}

bool contains_shape(const shape::Cylinder& c, std::span<const double> x) {
  const Eigen::Index k = c.complement_basis.cols();
  double coords[16];
  std::vector<double> heap;
  double* out = coords;
  if (k > 16) {
    heap.resize(static_cast<std::size_t>(k));
    out = heap.data();
  }
  for (Eigen::Index col = 0; col < k; ++col) {
    double dot = 0.0;
    for (Eigen::Index r = 0; r < c.complement_basis.rows(); ++r) dot += c.complement_basis(r, col) * x[r];
    out[col] = dot;
  }
  return c.base.contains(std::span<const double>(out, static_cast<std::size_t>(k)));
}

bool contains_shape(const shape::Complement& c, std::span<const double> x) { return !c.inner.contains(x); }

bool contains_shape(const shape::Translate& t, std::span<const double> x) {
  Vec shifted(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) shifted(static_cast<Eigen::Index>(i)) = x[i] - t.offset(static_cast<Eigen::Index>(i));
  return t.inner.contains(shifted);
}

bool contains_shape(const shape::Preimage& p, std::span<const double> x) {
  const Eigen::Index d = p.map.rows();
  double buf[16];
  std::vector<double> heap;
  double* out = buf;
  if (d > 16) {
    heap.resize(static_cast<std::size_t>(d));
    out = heap.data();
  }
  for (Eigen::Index r = 0; r < d; ++r) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < p.map.cols(); ++c) s += p.map(r, c) * x[c];
    out[r] = s;
  }
  return p.inner.contains(std::span<const double>(out, static_cast<std::size_t>(d)));
}

bool contains_shape(const shape::Intersection& s, std::span<const double> x) {
  return s.lhs.contains(x) && s.rhs.contains(x);
}

bool contains_impl(const detail::RegionNode& node, std::span<const double> x) {
  return std::visit([&](const auto& s) { return contains_shape(s, x); }, node.shape);
}

}  // namespace

Mat orthogonal_complement(const Mat& axis, int dim) {
  std::vector<Vec> cols;
  for (Eigen::Index c = 0; c < axis.cols(); ++c) cols.push_back(axis.col(c));
  const std::size_t fixed = cols.size();
  for (int e = 0; e < dim && static_cast<int>(cols.size()) < dim; ++e) {
    Vec v = Vec::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : cols) v -= c.dot(v) * c;
    if (v.norm() > 1e-6) cols.push_back(v.normalized());
  }
  Mat out(dim, static_cast<Eigen::Index>(cols.size() - fixed));
  for (std::size_t k = fixed; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k - fixed)) = cols[k];
  return out;
}

int Region::dim() const { return node_->dim; }

bool Region::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != node_->dim)
    throw Error(ErrorCode::BadParameter, "point dimension does not match region");
  return contains_impl(*node_, x);
}

std::string Region::kind() const {
  return std::visit(overloaded{
                        [](const shape::AllSpace&) { return std::string("all"); },
                        [](const shape::Ball&) { return std::string("ball"); },
                        [](const shape::Cube&) { return std::string("cube"); },
                        [](const shape::EAlpha&) { return std::string("ealpha"); },
                        [](const shape::GDelta&) { return std::string("gdelta"); },
                        [](const shape::FDelta&) { return std::string("fdelta"); },
                        [](const shape::Cone&) { return std::string("cone"); },
                        [](const shape::Cylinder&) { return std::string("cylinder"); },
                        [](const shape::Complement&) { return std::string("complement"); },
                        [](const shape::Translate&) { return std::string("translate"); },
                        [](const shape::Preimage&) { return std::string("preimage"); },
                        [](const shape::Intersection&) { return std::string("intersection"); },
                    },
                    node_->shape);
}

std::optional<double> Region::bounding_half_width() const {
  return std::visit(
      overloaded{
          [](const shape::Ball& b) -> std::optional<double> { return b.r; },
          [](const shape::Cube& c) -> std::optional<double> { return c.r; },
          [](const shape::Translate& t) -> std::optional<double> {
            auto inner = t.inner.bounding_half_width();
            if (!inner) return std::nullopt;
            return *inner + t.offset.cwiseAbs().maxCoeff();
          },
          [](const shape::Preimage& p) -> std::optional<double> {
            auto inner = p.inner.bounding_half_width();
            if (!inner) return std::nullopt;
            const Mat inv = p.map.inverse();
            return *inner * inv.cwiseAbs().rowwise().sum().maxCoeff();
          },
          [](const shape::Intersection& s) -> std::optional<double> {
            auto a = s.lhs.bounding_half_width();
            auto b = s.rhs.bounding_half_width();
            if (a && b) return std::min(*a, *b);
            return a ? a : b;
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      node_->shape);
}

Region Region::all_space(int dim) {
  require(dim >= 1, "dimension must be >= 1");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{dim, shape::AllSpace{}}));
}

Region Region::ball(int dim, double r) {
  require(dim >= 1, "dimension must be >= 1");
  require(r > 0.0 && std::isfinite(r), "ball radius must be positive");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{dim, shape::Ball{r}}));
}

Region Region::cube(int dim, double r) {
  require(dim >= 1, "dimension must be >= 1");
  require(r > 0.0 && std::isfinite(r), "cube half side must be positive");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{dim, shape::Cube{r}}));
}

Region Region::ealpha(int dim, double alpha, int i, int l) {
  require(dim >= 2, "ealpha needs dimension >= 2");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(i >= 0 && l >= 0 && i < dim && l < dim && i != l, "ealpha coordinates must be distinct and in range");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{dim, shape::EAlpha{alpha, i, l}}));
}

Region Region::gdelta(double delta, const Mat& u1) {
  require(delta > 0.0 && std::isfinite(delta), "delta must be positive");
  require(u1.cols() >= 1, "U1 must be nontrivial");
  require_orthonormal(u1, "U1");
  const int d = static_cast<int>(u1.rows());
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{d, shape::GDelta{delta, u1}}));
}

namespace {
void require_split(const Mat& u, const Mat& v) {
  require(u.cols() >= 1, "U must be nontrivial");
  require(u.rows() == v.rows() || v.cols() == 0, "U and V must live in the same space");
  require_orthonormal(u, "U");
  if (v.cols() > 0) {
    require_orthonormal(v, "V");
    require((u.transpose() * v).cwiseAbs().maxCoeff() <= kBasisTolerance, "V must be orthogonal to U");
  }
  require(u.cols() + v.cols() <= u.rows(), "U + V exceeds the ambient dimension");
}
}  // namespace

Region Region::fdelta(double delta, const Mat& u, const Mat& v) {
  require(delta > 0.0 && std::isfinite(delta), "delta must be positive");
  require_split(u, v);
  const int d = static_cast<int>(u.rows());
  Mat vv = v.cols() ? v : Mat(d, 0);
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{d, shape::FDelta{delta, u, vv}}));
}

Region Region::cone(double kappa, const Mat& u, const Mat& v) {
  require(kappa > 0.0 && kappa < 1.0, "cone aperture kappa must lie in (0, 1)");
  require_split(u, v);
  const int d = static_cast<int>(u.rows());
  Mat vv = v.cols() ? v : Mat(d, 0);
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{d, shape::Cone{kappa, u, vv}}));
}

Region Region::cylinder(const Region& base, const Mat& axis, const Mat& complement_basis) {
  const int d = static_cast<int>(axis.rows());
  require(d >= 1, "cylinder axis must be given as a d x p matrix");
  if (axis.cols() > 0) require_orthonormal(axis, "cylinder axis");
  Mat comp = complement_basis;
  if (comp.size() == 0) {
    comp = orthogonal_complement(axis, d);
  } else {
    require(comp.rows() == d, "complement basis has wrong row count");
    require_orthonormal(comp, "complement basis");
    if (axis.cols() > 0)
      require((axis.transpose() * comp).cwiseAbs().maxCoeff() <= kBasisTolerance,
              "complement basis must be orthogonal to the axis");
  }
  require(axis.cols() + comp.cols() == d, "axis and complement must span R^d");
  require(base.dim() == comp.cols(), "cylinder base dimension must equal d - dim(axis)");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{d, shape::Cylinder{base, axis, comp}}));
}

Region Region::complement(const Region& r) {
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{r.dim(), shape::Complement{r}}));
}

Region Region::translate(const Region& r, const Vec& offset) {
  require(offset.size() == r.dim(), "offset dimension mismatch");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{r.dim(), shape::Translate{r, offset}}));
}

Region Region::preimage(const Region& r, const Mat& m) {
  require(m.rows() == r.dim() && m.cols() == r.dim(), "preimage map must be d x d");
  if (std::abs(m.determinant()) <= 1e-300 || !m.allFinite())
    throw Error(ErrorCode::SingularMatrix, "preimage map is singular");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{r.dim(), shape::Preimage{r, m}}));
}

Region Region::intersection(const Region& a, const Region& b) {
  require(a.dim() == b.dim(), "intersection of regions of different dimension");
  return Region(std::make_shared<detail::RegionNode>(detail::RegionNode{a.dim(), shape::Intersection{a, b}}));
}

}  // namespace densilab
