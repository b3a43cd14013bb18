#pragma once

#include <iosfwd>
#include <vector>

#include "biortho/potentials.hpp"
#include "biortho/precision.hpp"
#include "biortho/quadrature.hpp"
#include "biortho/theta.hpp"

namespace biortho {

enum class MomentMethod {
  automatic,    // Gamma function for linear V, quadrature otherwise
  closed_form,  // Gamma function only (linear V)
  quadrature,   // exp-sinh quadrature in working precision
};

/// Bimoments m_jk = int_0^inf x^{k + j theta} w(x) dx for 0 <= j, k <= size - 1.
/// Entries are computed once at construction; the table is immutable after.
class BimomentTable {
 public:
  BimomentTable(const Weight& w, const Theta& theta, int max_index, const PrecisionContext& ctx,
                MomentMethod method = MomentMethod::automatic);

  int max_index() const { return max_index_; }
  const Theta& theta() const { return theta_; }
  const Weight& weight() const { return weight_; }
  const PrecisionContext& context() const { return ctx_; }
  const Real& operator()(int j, int k) const { return entries_[j * (max_index_ + 1) + k]; }

 private:
  Weight weight_;
  Theta theta_;
  int max_index_;
  PrecisionContext ctx_;
  std::vector<Real> entries_;
};

/// Single bimoment. Uses the Gamma function when V is linear unless
/// `method` asks for quadrature.
Real bimoment(const Weight& w, const Theta& theta, int j, int k, const PrecisionContext& ctx,
              MomentMethod method = MomentMethod::automatic);

/// Determinant of the leading n x n block (partial-pivoting LU). Throws
/// NonPositive when the result is not positive, which can only happen when
/// the working precision has run out.
Real hankel_det(const BimomentTable& table, int n);

/// Z_n = n! H_n.
Real partition_function(const BimomentTable& table, int n);

/// CSV rows "j,k,m_jk" with 40 significant digits, preceded by a header.
void write_bimoments_csv(std::ostream& os, const BimomentTable& table);

}  // namespace biortho
