#include "extcond/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace extcond {

namespace {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using BlockVec = std::vector<RMat>;

// Real standard form; complex Hermitian blocks arrive embedded with a 1/2
// factor so that <A_emb, X_emb> equals the complex inner product.
struct RealForm {
  std::vector<int> dims;
  BlockVec c;
  struct Row {
    std::vector<std::pair<int, RMat>> terms;
    double rhs = 0.0;
  };
  std::vector<Row> rows;
  std::vector<bool> embedded;  // per block
};

RMat embed_half(const Mat& a) {
  const int d = static_cast<int>(a.rows());
  RMat e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = 0.5 * a.real();
  e.topRightCorner(d, d) = -0.5 * a.imag();
  e.bottomLeftCorner(d, d) = 0.5 * a.imag();
  e.bottomRightCorner(d, d) = 0.5 * a.real();
  return e;
}

Mat unembed(const RMat& y) {
  const int d = static_cast<int>(y.rows()) / 2;
  const RMat p = 0.5 * (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d));
  const RMat q = 0.5 * (y.bottomLeftCorner(d, d) - y.topRightCorner(d, d));
  Mat out(d, d);
  out.real() = p;
  out.imag() = q;
  return linalg::hermitize(out);
}

bool block_is_real(const SdpProblem& p, int blk) {
  auto imag_small = [](const Mat& m) { return m.imag().cwiseAbs().maxCoeff() < 1e-14; };
  if (blk < static_cast<int>(p.objective.size()) && p.objective[blk].size() > 0 &&
      !imag_small(p.objective[blk]))
    return false;
  for (const auto& con : p.constraints)
    for (const auto& [b, a] : con.terms)
      if (b == blk && !imag_small(a)) return false;
  return true;
}

struct Scaling {
  RMat r, rinv, w;
  RVec lam;
};

Scaling nt_scaling(const RMat& x, const RMat& z) {
  const int d = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<RMat> ez(z);
  RVec sz = ez.eigenvalues().cwiseMax(1e-150);
  const RMat uz = ez.eigenvectors();
  const RMat zh = uz * sz.cwiseSqrt().asDiagonal() * uz.transpose();
  const RMat zih = uz * sz.cwiseSqrt().cwiseInverse().asDiagonal() * uz.transpose();
  const RMat t = zh * x * zh;
  Eigen::SelfAdjointEigenSolver<RMat> et(0.5 * (t + t.transpose()));
  RVec st = et.eigenvalues().cwiseMax(1e-150);
  const RMat ut = et.eigenvectors();
  const RVec q4 = st.array().pow(0.25).matrix();
  Scaling s;
  s.lam = st.cwiseSqrt();
  s.r = zih * ut * q4.asDiagonal();
  s.rinv = q4.cwiseInverse().asDiagonal() * ut.transpose() * zh;
  s.w = s.r * s.r.transpose();
  (void)d;
  return s;
}

// Largest step alpha with X + alpha * D >= 0 (inf -> 10).
double max_step(const RMat& x, const RMat& dir) {
  Eigen::LLT<RMat> llt(x);
  RMat y;
  if (llt.info() == Eigen::Success) {
    const RMat l = llt.matrixL();
    RMat b = l.triangularView<Eigen::Lower>().solve(dir);
    y = l.triangularView<Eigen::Lower>().solve(b.transpose()).transpose();
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> ex(x);
    const RVec v = ex.eigenvalues().cwiseMax(1e-150);
    const RMat xi = ex.eigenvectors() * v.cwiseSqrt().cwiseInverse().asDiagonal() *
                    ex.eigenvectors().transpose();
    y = xi * dir * xi;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (y + y.transpose()), Eigen::EigenvaluesOnly);
  const double emin = es.eigenvalues().minCoeff();
  if (emin >= -1e-14) return 10.0;
  return -1.0 / emin;
}

double ip(const RMat& a, const RMat& b) { return (a.array() * b.array()).sum(); }

struct RealSolution {
  SdpStatus status;
  BlockVec x;
  RVec y;
  double pobj, dobj, gap, prires, dures;
  int iterations;
};

RealSolution solve_real(const RealForm& f, double tol, int max_iter) {
  const int nb = static_cast<int>(f.dims.size());
  const int m = static_cast<int>(f.rows.size());
  int ntot = 0;
  for (int d : f.dims) ntot += d;

  RVec b(m);
  for (int i = 0; i < m; ++i) b[i] = f.rows[i].rhs;

  double data_scale = 1.0;
  for (const auto& cb : f.c) if (cb.size() > 0) data_scale = std::max(data_scale, cb.cwiseAbs().maxCoeff());
  const double s0 = std::max({1.0, b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0, data_scale});

  BlockVec x(nb), z(nb);
  for (int bi = 0; bi < nb; ++bi) {
    x[bi] = RMat::Identity(f.dims[bi], f.dims[bi]) * s0;
    z[bi] = RMat::Identity(f.dims[bi], f.dims[bi]) * s0;
  }
  RVec y = RVec::Zero(m);

  // per-block row lists for Schur assembly
  std::vector<std::vector<std::pair<int, const RMat*>>> rows_of_block(nb);
  for (int i = 0; i < m; ++i)
    for (const auto& [bi, a] : f.rows[i].terms) rows_of_block[bi].emplace_back(i, &a);

  auto apply_a = [&](const BlockVec& v) {
    RVec out(m);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (const auto& [bi, a] : f.rows[i].terms) s += ip(a, v[bi]);
      out[i] = s;
    }
    return out;
  };
  auto apply_at = [&](const RVec& v) {
    BlockVec out(nb);
    for (int bi = 0; bi < nb; ++bi) out[bi] = RMat::Zero(f.dims[bi], f.dims[bi]);
    for (int i = 0; i < m; ++i)
      for (const auto& [bi, a] : f.rows[i].terms) out[bi] += v[i] * a;
    return out;
  };

  const double bnorm = 1.0 + b.norm();
  double cnorm = 1.0;
  for (const auto& cb : f.c) cnorm += cb.squaredNorm();
  cnorm = std::sqrt(cnorm);

  RealSolution sol;
  sol.status = SdpStatus::limit;
  int it = 0;
  double mu = 0.0;
  for (it = 1; it <= max_iter; ++it) {
    const RVec rp = b - apply_a(x);
    BlockVec aty = apply_at(y);
    BlockVec rd(nb);
    double rdnorm2 = 0.0, gap = 0.0, pobj = 0.0;
    for (int bi = 0; bi < nb; ++bi) {
      rd[bi] = f.c[bi] - z[bi] - aty[bi];
      rdnorm2 += rd[bi].squaredNorm();
      gap += ip(x[bi], z[bi]);
      pobj += ip(f.c[bi], x[bi]);
    }
    const double dobj = b.dot(y);
    mu = gap / ntot;
    const double prires = rp.norm() / bnorm;
    const double dures = std::sqrt(rdnorm2) / cnorm;
    const double relgap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double objgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    sol.x = x;
    sol.y = y;
    sol.pobj = pobj;
    sol.dobj = dobj;
    sol.gap = gap;
    sol.prires = prires;
    sol.dures = dures;
    sol.iterations = it - 1;

    if (prires <= tol && dures <= tol && relgap <= tol && objgap <= tol) {
      sol.status = SdpStatus::optimal;
      return sol;
    }
    if (y.size() > 0 && y.cwiseAbs().maxCoeff() > 1e11 && dobj > 0) {
      sol.status = SdpStatus::infeasible;
      return sol;
    }

    // Nesterov-Todd scalings
    std::vector<Scaling> sc(nb);
    for (int bi = 0; bi < nb; ++bi) sc[bi] = nt_scaling(x[bi], z[bi]);

    // Schur complement M_ij = sum_blk <A_i, W A_j W>
    std::vector<std::vector<RMat>> waw(m);
    for (int i = 0; i < m; ++i) {
      waw[i].resize(f.rows[i].terms.size());
      for (size_t t = 0; t < f.rows[i].terms.size(); ++t) {
        const auto& [bi, a] = f.rows[i].terms[t];
        waw[i][t] = sc[bi].w * a * sc[bi].w;
      }
    }
    RMat schur = RMat::Zero(m, m);
    for (int bi = 0; bi < nb; ++bi) {
      const auto& rows = rows_of_block[bi];
      for (size_t p = 0; p < rows.size(); ++p) {
        const int i = rows[p].first;
        size_t ti = 0;
        while (f.rows[i].terms[ti].first != bi) ++ti;
        for (size_t q2 = 0; q2 <= p; ++q2) {
          const int j = rows[q2].first;
          schur(std::max(i, j), std::min(i, j)) += ip(*rows[q2].second, waw[i][ti]);
        }
      }
    }
    schur = schur.selfadjointView<Eigen::Lower>();

    Eigen::LDLT<RMat> fact(schur);
    if (fact.info() != Eigen::Success || !fact.isPositive()) {
      const double ridge = 1e-12 * (1.0 + schur.diagonal().cwiseAbs().maxCoeff());
      fact.compute(schur + ridge * RMat::Identity(m, m));
      if (fact.info() != Eigen::Success) break;
    }

    auto direction = [&](const BlockVec& fsig, RVec& dy, BlockVec& dz, BlockVec& dx) {
      RVec rhs = rp;
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (size_t t = 0; t < f.rows[i].terms.size(); ++t) {
          const auto& [bi, a] = f.rows[i].terms[t];
          s += -ip(a, fsig[bi]) + ip(waw[i][t], rd[bi]);
        }
        rhs[i] += s;
      }
      dy = fact.solve(rhs);
      BlockVec atdy = apply_at(dy);
      dz.resize(nb);
      dx.resize(nb);
      for (int bi = 0; bi < nb; ++bi) {
        dz[bi] = rd[bi] - atdy[bi];
        dx[bi] = fsig[bi] - sc[bi].w * dz[bi] * sc[bi].w;
      }
    };

    // predictor (affine) direction
    BlockVec fsig(nb);
    for (int bi = 0; bi < nb; ++bi) fsig[bi] = -x[bi];
    RVec dy_a;
    BlockVec dz_a, dx_a;
    direction(fsig, dy_a, dz_a, dx_a);

    double ap = 1.0, ad = 1.0;
    for (int bi = 0; bi < nb; ++bi) {
      ap = std::min(ap, 0.98 * max_step(x[bi], dx_a[bi]));
      ad = std::min(ad, 0.98 * max_step(z[bi], dz_a[bi]));
    }
    double gap_aff = 0.0;
    for (int bi = 0; bi < nb; ++bi)
      gap_aff += ip(x[bi] + ap * dx_a[bi], z[bi] + ad * dz_a[bi]);
    gap_aff = std::max(gap_aff, 0.0);
    double sigma = std::pow(gap_aff / gap, 3.0);
    if (!std::isfinite(sigma)) sigma = 0.5;
    sigma = std::min(0.999, std::max(1e-8, sigma));

    // corrector
    for (int bi = 0; bi < nb; ++bi) {
      const auto& s = sc[bi];
      const RMat dxt = s.rinv * dx_a[bi] * s.rinv.transpose();
      const RMat dzt = s.r.transpose() * dz_a[bi] * s.r;
      const RMat kcorr = 0.5 * (dxt * dzt + dzt.transpose() * dxt.transpose());
      RMat e = -kcorr;
      e.diagonal() += (sigma * mu - s.lam.array().square()).matrix();
      const int dd = f.dims[bi];
      RMat g(dd, dd);
      for (int i2 = 0; i2 < dd; ++i2)
        for (int j2 = 0; j2 < dd; ++j2)
          g(i2, j2) = 2.0 * e(i2, j2) / (s.lam[i2] + s.lam[j2]);
      g = 0.5 * (g + g.transpose());
      fsig[bi] = s.r * g * s.r.transpose();
    }
    RVec dy;
    BlockVec dz, dx;
    direction(fsig, dy, dz, dx);

    ap = 1.0;
    ad = 1.0;
    for (int bi = 0; bi < nb; ++bi) {
      ap = std::min(ap, 0.98 * max_step(x[bi], dx[bi]));
      ad = std::min(ad, 0.98 * max_step(z[bi], dz[bi]));
    }
    if (ap < 1e-12 && ad < 1e-12) break;
    for (int bi = 0; bi < nb; ++bi) {
      x[bi] += ap * dx[bi];
      z[bi] += ad * dz[bi];
      x[bi] = 0.5 * (x[bi] + x[bi].transpose()).eval();
      z[bi] = 0.5 * (z[bi] + z[bi].transpose()).eval();
    }
    y += ad * dy;
  }

  // no convergence: distinguish a plain iteration cap from likely infeasibility
  if (sol.prires > std::sqrt(tol) && sol.gap / ntot < tol * tol && sol.dobj > 0)
    sol.status = SdpStatus::infeasible;
  return sol;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, double tol, int max_iter) {
  const int nb = static_cast<int>(p.block_dims.size());
  if (nb == 0 || p.constraints.empty())
    throw ValidationError("solve_sdp needs at least one block and one constraint");

  std::vector<bool> real_block(nb);
  for (int bi = 0; bi < nb; ++bi) real_block[bi] = block_is_real(p, bi);

  RealForm f;
  f.dims.resize(nb);
  f.c.resize(nb);
  f.embedded.resize(nb);
  const double sign = p.maximize ? -1.0 : 1.0;
  for (int bi = 0; bi < nb; ++bi) {
    const int d = p.block_dims[bi];
    Mat cb = (bi < static_cast<int>(p.objective.size()) && p.objective[bi].size() > 0)
                 ? linalg::hermitize(p.objective[bi])
                 : Mat::Zero(d, d);
    if (cb.rows() != d) throw ValidationError("objective block dimension mismatch");
    f.embedded[bi] = !real_block[bi];
    f.dims[bi] = real_block[bi] ? d : 2 * d;
    f.c[bi] = real_block[bi] ? RMat(sign * cb.real()) : RMat(sign * embed_half(cb));
  }
  for (const auto& con : p.constraints) {
    RealForm::Row row;
    row.rhs = con.rhs;
    for (const auto& [bi, a] : con.terms) {
      if (bi < 0 || bi >= nb) throw ValidationError("constraint references unknown block");
      const Mat ah = linalg::hermitize(a);
      if (ah.rows() != p.block_dims[bi]) throw ValidationError("constraint block dimension mismatch");
      row.terms.emplace_back(bi, real_block[bi] ? RMat(ah.real()) : embed_half(ah));
    }
    if (row.terms.empty()) {
      if (std::abs(row.rhs) > 1e-12) throw ValidationError("constraint with no variables");
      continue;
    }
    f.rows.push_back(std::move(row));
  }

  RealSolution rs = solve_real(f, tol, max_iter);

  SdpSolution out;
  out.status = rs.status;
  out.iterations = rs.iterations;
  out.gap = rs.gap;
  out.primal_residual = rs.prires;
  out.dual_residual = rs.dures;
  out.primal_x.resize(nb);
  for (int bi = 0; bi < nb; ++bi)
    out.primal_x[bi] = f.embedded[bi] ? unembed(rs.x[bi]) : Mat(rs.x[bi].cast<std::complex<double>>());
  out.dual_y = sign * rs.y;
  out.primal_value = sign * rs.pobj;
  out.dual_value = sign * rs.dobj;
  return out;
}

}  // namespace extcond
