#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace datasim {

double normal_cdf(double z);

// Regularized upper incomplete gamma Q(s, x); chi-square upper tail is
// Q(df/2, x/2).
double gamma_q(double s, double x);
double chi_square_upper_tail(double x, double df);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);

// Shortest round-trip decimal representation, used everywhere results are
// serialized so re-runs are byte-comparable.
std::string format_double(double v);

} // namespace datasim
