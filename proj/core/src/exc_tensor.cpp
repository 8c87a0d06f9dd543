#include "ccinterp/exc_tensor.hpp"

#include <string>

#include "ccinterp/errors.hpp"
#include "ccinterp/scf.hpp"

namespace ccinterp {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t n_modes(int rank) { return static_cast<std::size_t>(2 * rank); }

}  // namespace

ExcTensor ExcTensor::mo(Tensor data) {
  if (data.rank() != 2 && data.rank() != 4) {
    throw ShapeMismatch("excitation tensor must have 2 or 4 modes, got " + data.shape_string());
  }
  ExcTensor t;
  t.rank = static_cast<int>(data.rank() / 2);
  t.basis = BasisTag::MO;
  t.data = std::move(data);
  return t;
}

TransformPair TransformPair::from_spatial(const Matrix& S, const Matrix& C, std::size_t n_occ) {
  if (S.rows() != S.cols() || C.rows() != S.rows() || n_occ > static_cast<std::size_t>(C.cols())) {
    throw ShapeMismatch("TransformPair: inconsistent S/C shapes");
  }
  const Matrix Cs = spin_block(C);
  const auto no = static_cast<Eigen::Index>(2 * n_occ);
  TransformPair tp;
  tp.S = spin_block(S);
  tp.C_occ = Cs.leftCols(no);
  tp.C_virt = Cs.rightCols(Cs.cols() - no);
  return tp;
}

double TransformPair::orthonormality_error() const {
  const auto I_o = Matrix::Identity(C_occ.cols(), C_occ.cols());
  const auto I_v = Matrix::Identity(C_virt.cols(), C_virt.cols());
  double e = (C_occ.transpose() * S * C_occ - I_o).cwiseAbs().maxCoeff();
  if (C_virt.cols() > 0) {
    e = std::max(e, (C_virt.transpose() * S * C_virt - I_v).cwiseAbs().maxCoeff());
    e = std::max(e, (C_occ.transpose() * S * C_virt).cwiseAbs().maxCoeff());
  }
  return e;
}

Tensor n_mode_product(const Tensor& T, const Matrix& M, std::size_t mode) {
  if (mode >= T.rank()) {
    throw ShapeMismatch("mode " + std::to_string(mode) + " out of range for " + T.shape_string());
  }
  const std::size_t n = T.dim(mode);
  if (static_cast<std::size_t>(M.cols()) != n) {
    throw ShapeMismatch("matrix with " + std::to_string(M.cols()) + " columns applied to mode " +
                        std::to_string(mode) + " of " + T.shape_string());
  }
  auto dims = T.dims();
  std::size_t left = 1, right = 1;
  for (std::size_t m = 0; m < mode; ++m) left *= dims[m];
  for (std::size_t m = mode + 1; m < dims.size(); ++m) right *= dims[m];
  dims[mode] = static_cast<std::size_t>(M.rows());
  Tensor out(dims);
  const auto rows = M.rows();
  const auto ni = static_cast<Eigen::Index>(n), nr = static_cast<Eigen::Index>(right);
  for (std::size_t l = 0; l < left; ++l) {
    Eigen::Map<const RowMajor> in(T.data() + l * n * right, ni, nr);
    Eigen::Map<RowMajor> dst(out.data() + l * static_cast<std::size_t>(rows) * right, rows, nr);
    dst.noalias() = M * in;
  }
  return out;
}

ExcTensor apply_blocks(const ExcTensor& T, const Matrix& Mv, const Matrix& Mo, BasisTag result) {
  if (T.data.rank() != n_modes(T.rank)) {
    throw ShapeMismatch("excitation tensor rank " + std::to_string(T.rank) + " with data " +
                        T.data.shape_string());
  }
  ExcTensor out;
  out.rank = T.rank;
  out.basis = result;
  Tensor cur = T.data;
  const auto k = static_cast<std::size_t>(T.rank);
  for (std::size_t m = 0; m < k; ++m) cur = n_mode_product(cur, Mv, m);
  for (std::size_t m = k; m < 2 * k; ++m) cur = n_mode_product(cur, Mo, m);
  out.data = std::move(cur);
  return out;
}

ExcTensor mo_to_ao(const ExcTensor& T, const TransformPair& tp) {
  if (T.basis != BasisTag::MO) throw ShapeMismatch("mo_to_ao expects an MO tensor");
  return apply_blocks(T, tp.C_virt, tp.C_occ, BasisTag::AO);
}

ExcTensor ao_to_mo(const ExcTensor& T, const TransformPair& tp) {
  if (T.basis != BasisTag::AO) throw ShapeMismatch("ao_to_mo expects an AO tensor");
  const Matrix Lv = tp.C_virt.transpose() * tp.S;
  const Matrix Lo = tp.C_occ.transpose() * tp.S;
  return apply_blocks(T, Lv, Lo, BasisTag::MO);
}

CrossFactors cross_factors(const TransformPair& target, const TransformPair& source) {
  if (target.S.rows() != source.C_occ.rows() || target.C_occ.cols() != source.C_occ.cols() ||
      target.C_virt.cols() != source.C_virt.cols()) {
    throw ShapeMismatch("cross_transform: source and target frames differ in shape");
  }
  return {target.C_virt.transpose() * target.S * source.C_virt,
          target.C_occ.transpose() * target.S * source.C_occ};
}

ExcTensor cross_transform(const ExcTensor& T, const TransformPair& target,
                          const TransformPair& source) {
  if (T.basis != BasisTag::MO) throw ShapeMismatch("cross_transform expects an MO tensor");
  const auto f = cross_factors(target, source);
  return apply_blocks(T, f.L_virt, f.L_occ, BasisTag::MO);
}

AmplitudeSet cross_transform(const AmplitudeSet& t, const CrossFactors& factors) {
  AmplitudeSet out;
  out.t1 = apply_blocks(ExcTensor::mo(t.t1), factors.L_virt, factors.L_occ, BasisTag::MO).data;
  out.t2 = apply_blocks(ExcTensor::mo(t.t2), factors.L_virt, factors.L_occ, BasisTag::MO).data;
  return out;
}

AmplitudeSet cross_transform(const AmplitudeSet& t, const TransformPair& target,
                             const TransformPair& source) {
  return cross_transform(t, cross_factors(target, source));
}

}  // namespace ccinterp
