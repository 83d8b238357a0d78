#ifndef MIXNORM_IO_HPP
#define MIXNORM_IO_HPP

#include <iosfwd>
#include <string>

#include "mixnorm/measure_space.hpp"
#include "mixnorm/operator_bounds.hpp"
#include "mixnorm/random_field.hpp"
#include "mixnorm/tail_calculus.hpp"

// CSV files use '.' as decimal separator and 17 significant digits, so
// every value round-trips exactly. Lines starting with '#' are comments.

namespace mixnorm::io {

std::string format_real(double v);

/// One row per cell: i0,...,i{l-1},value.
void write_grid_function(std::ostream& os, const GridFunction& f);
GridFunction read_grid_function(std::istream& is, const ProductSpace& space);

/// replica,zeta
void write_samples(std::ostream& os, const SampleSet& samples);

/// r,psi with the interval ends in a leading comment.
void write_psi_table(std::ostream& os, const PsiTable& table);
PsiTable read_psi_table(std::istream& is);

/// u,g,bound
void write_tail_curve(std::ostream& os, const TailCurve& curve);
TailCurve read_tail_curve(std::istream& is);

/// s,theta,lhs,g_norm,ratio,pass followed by se,tolerance,hypothesis and,
/// for factorable kernels, factorized_theta.
void write_operator_report(std::ostream& os, const OperatorBoundReport& report);
/// Machine-readable summary as a JSON document.
std::string operator_report_summary(const OperatorBoundReport& report);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace mixnorm::io

#endif  // MIXNORM_IO_HPP
