#pragma once

// m o Psi_alpha built without compose_mobius: Taylor coefficients come from a
// Cauchy sum of the mapped evaluator on a circle of radius rho.

#include <memory>
#include <string>

#include "oracles.hpp"
#include "wcop/weight.hpp"

namespace oracle {

inline cplx psi(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

class MappedSource final : public wcop::WeightSource {
 public:
  MappedSource(std::shared_ptr<const wcop::WeightSource> base, cplx alpha, double rho = 0.99, std::size_t nodes = 4096)
      : base_(std::move(base)), alpha_(alpha), rho_(rho), nodes_(nodes) {}

  std::string describe() const override { return "mapped " + base_->describe(); }
  std::vector<cplx> coefficients(std::size_t order) const override {
    return cauchy_coefficients([&](cplx z) { return value(z); }, order, rho_, nodes_);
  }
  cplx value(cplx z) const override { return base_->value(psi(alpha_, z)); }
  cplx log_value(cplx z) const override { return base_->log_value(psi(alpha_, z)); }
  bool has_boundary() const override { return base_->has_boundary(); }
  double boundary_log_abs(double t) const override {
    return base_->boundary_log_abs(std::arg(psi(alpha_, std::polar(1.0, t))));
  }
  std::optional<std::vector<wcop::ZeroInfo>> zeros() const override {
    auto zs = base_->zeros();
    if (zs)
      for (auto& z : *zs) z.location = psi(alpha_, z.location);
    return zs;
  }

 private:
  std::shared_ptr<const wcop::WeightSource> base_;
  cplx alpha_;
  double rho_;
  std::size_t nodes_;
};

inline wcop::Weight mapped_weight(const wcop::Weight& m, cplx alpha) {
  return wcop::Weight(std::make_shared<MappedSource>(m.source_ptr(), alpha), m.order());
}

}  // namespace oracle
