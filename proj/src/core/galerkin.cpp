#include "sdcadj/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "sdcadj/errors.hpp"

namespace sdcadj {

int select_order(double dt, int M, int K) {
  if (!(dt > 0.0) || !(dt < 1.0)) {
    throw InvalidArgument("select_order: step must lie in (0, 1)");
  }
  if (M < 1 || K < 1) throw InvalidArgument("select_order: M and K must be positive");
  const double order = std::min(K, M);
  const double log_dt = std::log(dt);
  const double raw = order * log_dt / (log_dt - std::log(static_cast<double>(M))) - 1.0;
  const double q = std::ceil(raw);
  return static_cast<int>(std::clamp(q, 1.0, static_cast<double>(kMaxGalerkinDegree)));
}

std::vector<double> uniform_unit_nodes(int n) {
  if (n < 1) throw InvalidArgument("uniform_unit_nodes: need at least one node");
  std::vector<double> nodes(static_cast<std::size_t>(n));
  if (n == 1) return {0.0};
  for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  nodes.back() = 1.0;
  return nodes;
}

CgFunction::CgFunction(TimeMesh mesh, int degree, int dimension, std::vector<Vector> coefficients,
                       bool continuous)
    : mesh_(std::move(mesh)),
      degree_(degree),
      dimension_(dimension),
      coefficients_(std::move(coefficients)),
      continuous_(continuous),
      unit_basis_(uniform_unit_nodes(std::max(degree, 1) + 1)) {
  if (degree < 1 || degree > kMaxGalerkinDegree) {
    throw InvalidArgument("CgFunction: degree out of range");
  }
  const auto expected =
      static_cast<std::size_t>(mesh_.subinterval_count()) * (static_cast<std::size_t>(degree) + 1);
  if (coefficients_.size() != expected) throw InvalidArgument("CgFunction: wrong coefficient count");
}

CgFunction CgFunction::sample(const TimeMesh& mesh, int degree, const TimeFn& fn) {
  const int segments = mesh.subinterval_count();
  std::vector<Vector> coeffs;
  coeffs.reserve(static_cast<std::size_t>(segments) * (static_cast<std::size_t>(degree) + 1));
  const auto bp = mesh.breakpoints();
  Vector left = fn(bp[0]);
  for (int s = 0; s < segments; ++s) {
    const double a = bp[static_cast<std::size_t>(s)];
    const double b = bp[static_cast<std::size_t>(s) + 1];
    coeffs.push_back(left);
    for (int i = 1; i < degree; ++i) coeffs.push_back(fn(a + (b - a) * i / degree));
    Vector right = fn(b);
    coeffs.push_back(right);
    left = std::move(right);
  }
  const int dim = static_cast<int>(coeffs.front().size());
  return CgFunction(mesh, degree, dim, std::move(coeffs), true);
}

double CgFunction::local_node(int s, int i) const {
  if (i == 0) return segment_begin(s);
  if (i == degree_) return segment_end(s);
  const double a = segment_begin(s);
  return a + (segment_end(s) - a) * i / degree_;
}

int CgFunction::locate(double t) const {
  const auto bp = mesh_.breakpoints();
  // First breakpoint >= t closes the segment on its left.
  const auto it = std::lower_bound(bp.begin() + 1, bp.end(), t);
  if (it == bp.end()) return segment_count() - 1;
  return static_cast<int>(it - bp.begin()) - 1;
}

Vector CgFunction::eval(double t) const {
  if (!(t >= 0.0 && t <= mesh_.final_time())) {
    throw InvalidArgument("CgFunction::eval: t outside [0, T]");
  }
  return eval_in(locate(t), t);
}

Vector CgFunction::deriv(double t) const {
  if (!(t >= 0.0 && t <= mesh_.final_time())) {
    throw InvalidArgument("CgFunction::deriv: t outside [0, T]");
  }
  return deriv_in(locate(t), t);
}

Vector CgFunction::eval_in(int s, double t) const {
  const auto coeffs = segment(s);
  const double a = segment_begin(s);
  const double b = segment_end(s);
  if (t == a) return coeffs.front();
  if (t == b) return coeffs.back();
  const double u = (t - a) / (b - a);
  // Expanding around the first coefficient keeps the rounding relative to the
  // variation within the segment rather than to |Y|.
  Vector out = Vector::Zero(dimension_);
  for (int i = 1; i <= degree_; ++i) {
    out += unit_basis_.value(static_cast<std::size_t>(i), u) * (coeffs[static_cast<std::size_t>(i)] - coeffs[0]);
  }
  return coeffs[0] + out;
}

Vector CgFunction::deriv_in(int s, double t) const {
  const auto coeffs = segment(s);
  const double a = segment_begin(s);
  const double b = segment_end(s);
  const double u = (t - a) / (b - a);
  Vector out = Vector::Zero(dimension_);
  for (int i = 1; i <= degree_; ++i) {
    out += unit_basis_.derivative(static_cast<std::size_t>(i), u) *
           (coeffs[static_cast<std::size_t>(i)] - coeffs[0]);
  }
  return out / (b - a);
}

CgFunction CgFunction::reversed() const {
  const int segments = segment_count();
  std::vector<Vector> coeffs;
  coeffs.reserve(coefficients_.size());
  for (int s = segments - 1; s >= 0; --s) {
    const auto seg = segment(s);
    for (auto it = seg.rbegin(); it != seg.rend(); ++it) coeffs.push_back(*it);
  }
  return CgFunction(mesh_.reversed(), degree_, dimension_, std::move(coeffs), continuous_);
}

namespace {

// Reference integrals on a unit subinterval u in [0, 1] for one (M, q) pair.
struct GalerkinOperators {
  Matrix stiffness;              // (q-1) x (q+1): int dl_j^q/du l_i^{q-1} du
  std::vector<Matrix> picard;    // per m: (q-1) x (M+1): int L_j(x(u)) l_i^{q-1}(u) du
  Eigen::PartialPivLU<Matrix> interior_lu;
};

GalerkinOperators build_operators(std::span<const double> reference_subnodes, int q) {
  const int M = static_cast<int>(reference_subnodes.size()) - 1;
  const LagrangeBasis trial(uniform_unit_nodes(q + 1));
  const LagrangeBasis test(uniform_unit_nodes(q));
  const LagrangeBasis subnode_basis({reference_subnodes.begin(), reference_subnodes.end()});
  // Highest integrand degree is max(2q-2, M+q-1).
  const QuadRule gauss = gauss_legendre((2 * q + M + 1) / 2 + 1);

  GalerkinOperators ops;
  ops.stiffness = Matrix::Zero(q - 1, q + 1);
  ops.picard.assign(static_cast<std::size_t>(M), Matrix::Zero(q - 1, M + 1));

  std::vector<double> dtrial(static_cast<std::size_t>(q) + 1);
  std::vector<double> tests(static_cast<std::size_t>(q));
  std::vector<double> lagrange(static_cast<std::size_t>(M) + 1);
  for (std::size_t g = 0; g < gauss.nodes.size(); ++g) {
    const double u = 0.5 * (gauss.nodes[g] + 1.0);
    const double w = 0.5 * gauss.weights[g];
    trial.derivatives(u, dtrial);
    test.values(u, tests);
    for (int i = 0; i + 1 < q; ++i) {
      for (int j = 0; j <= q; ++j) {
        ops.stiffness(i, j) += w * dtrial[static_cast<std::size_t>(j)] * tests[static_cast<std::size_t>(i)];
      }
    }
    for (int m = 0; m < M; ++m) {
      const double x0 = reference_subnodes[static_cast<std::size_t>(m)];
      const double x1 = reference_subnodes[static_cast<std::size_t>(m) + 1];
      subnode_basis.values(x0 + u * (x1 - x0), lagrange);
      for (int i = 0; i + 1 < q; ++i) {
        for (int j = 0; j <= M; ++j) {
          ops.picard[static_cast<std::size_t>(m)](i, j) +=
              w * lagrange[static_cast<std::size_t>(j)] * tests[static_cast<std::size_t>(i)];
        }
      }
    }
  }

  const Matrix interior = ops.stiffness.block(0, 1, q - 1, q - 1);
  ops.interior_lu.compute(interior);
  const double rcond = ops.interior_lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "reconstruct: interior system is singular (condition estimate " << 1.0 / rcond << ")";
    throw NumericalFailure(msg.str());
  }
  return ops;
}

// Interior coefficients of one subinterval. `left_rhs` is the left-hand-rule
// jump f(Y^k) - f(Y^{k-1}) at the left subnode (explicit mode only).
void solve_interior(const GalerkinOperators& ops, int m, double h, const Vector& y_left,
                    const Vector& y_right, const Vector* left_rhs, const NodalValues& picard_rhs,
                    int q, std::vector<Vector>& out) {
  const int d = static_cast<int>(y_left.size());
  const int M = static_cast<int>(picard_rhs.size()) - 1;
  Matrix rhs(q - 1, d);
  const Matrix& B = ops.picard[static_cast<std::size_t>(m)];
  for (int i = 0; i + 1 < q; ++i) {
    Vector row = -ops.stiffness(i, 0) * y_left - ops.stiffness(i, q) * y_right;
    for (int j = 0; j <= M; ++j) row += (h * B(i, j)) * picard_rhs[static_cast<std::size_t>(j)];
    // Only the first test function is nonzero at the left end.
    if (i == 0 && left_rhs != nullptr) row += h * *left_rhs;
    rhs.row(i) = row.transpose();
  }
  const Matrix interior = ops.interior_lu.solve(rhs);
  for (int i = 0; i + 1 < q; ++i) out.push_back(interior.row(i).transpose());
}

}  // namespace

Reconstruction reconstruct(const SdcSolution& sdc, int degree) {
  if (degree < 1 || degree > kMaxGalerkinDegree) {
    throw InvalidArgument("reconstruct: degree out of range");
  }
  const TimeMesh& mesh = sdc.mesh;
  const int N = mesh.intervals();
  const int M = mesh.subintervals();
  const int q = degree;
  const bool explicit_mode = sdc.mode == SdcMode::Explicit;
  const int dim = static_cast<int>(sdc.final_state().size());

  std::optional<GalerkinOperators> ops;
  if (q > 1) ops = build_operators(mesh.reference_subnodes(), q);

  const std::size_t per_segment = static_cast<std::size_t>(q) + 1;
  std::vector<Vector> final_coeffs;
  std::vector<Vector> previous_coeffs;
  final_coeffs.reserve(static_cast<std::size_t>(mesh.subinterval_count()) * per_segment);
  previous_coeffs.reserve(final_coeffs.capacity());

  for (int n = 0; n < N; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const NodalValues& yk = sdc.final_values[un];
    const NodalValues& yk1 = sdc.previous_values[un];
    for (int m = 0; m < M; ++m) {
      const auto um = static_cast<std::size_t>(m);
      const double h = mesh.subinterval_length(n, m);

      final_coeffs.push_back(yk[um]);
      if (q > 1) {
        Vector jump;
        if (explicit_mode) jump = sdc.final_rhs[un][um] - sdc.previous_rhs[un][um];
        solve_interior(*ops, m, h, yk[um], yk[um + 1], explicit_mode ? &jump : nullptr,
                       sdc.previous_rhs[un], q, final_coeffs);
      }
      final_coeffs.push_back(yk[um + 1]);

      previous_coeffs.push_back(yk1[um]);
      if (q > 1) {
        if (sdc.iterations == 1) {
          // Y^0 is the flat initial iterate.
          for (int i = 1; i < q; ++i) previous_coeffs.push_back(yk1[um]);
        } else {
          Vector jump;
          if (explicit_mode) jump = sdc.previous_rhs[un][um] - sdc.before_previous_rhs[un][um];
          solve_interior(*ops, m, h, yk1[um], yk1[um + 1], explicit_mode ? &jump : nullptr,
                         sdc.before_previous_rhs[un], q, previous_coeffs);
        }
      }
      previous_coeffs.push_back(yk1[um + 1]);
    }
  }

  return Reconstruction{CgFunction(mesh, q, dim, std::move(final_coeffs), true),
                        CgFunction(mesh, q, dim, std::move(previous_coeffs), false)};
}

}  // namespace sdcadj
