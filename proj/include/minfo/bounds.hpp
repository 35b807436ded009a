#pragma once

// Variational lower bounds on KL(P || Q) evaluated from statistics-network
// outputs on joint samples (P) and marginal samples (Q). Values are in nats.

#include <span>

namespace minfo {

// log(mean(exp(t))) with a max shift so entries up to ~700 stay finite.
double log_mean_exp(std::span<const double> t);

// Donsker-Varadhan: mean(t_joint) - log(mean(exp(t_marg))).
double dv_value(std::span<const double> t_joint, std::span<const double> t_marg);

// f-divergence form: mean(t_joint) - mean(exp(t_marg - 1)).
double f_value(std::span<const double> t_joint, std::span<const double> t_marg);

}  // namespace minfo
