#pragma once

#include <string>

#include <json.hpp>

#include "density.hpp"
#include "equivalence.hpp"
#include "lattice.hpp"
#include "spectral.hpp"

namespace densilab {

// Big integers travel as JSON numbers when they fit in 64 bits, else as
// decimal strings.
nlohmann::json bigint_json(const BigInt& v);
nlohmann::json int_matrix_json(const IntMatrix& m);

nlohmann::json analyze_report(const SymMatrix& a, double tol = kDefaultTolerance);
nlohmann::json verdict_json(const EquivalenceVerdict& v);
nlohmann::json witness_json(const TrivialEquivalenceWitness& w);
nlohmann::json mra_report_json(const MraReport& r);
nlohmann::json dyadic_json(const DyadicResult& r);
nlohmann::json series_json(const DensitySeries& s);
nlohmann::json classification_json(const LatticeClassification& c);

// Everything the lattice module says about one matrix. Non-integer input
// only gets the dyadic part (when symmetric).
nlohmann::json classify_report(const Mat& m, int bound = kDefaultSearchBound, int l_max = kDefaultLMax,
                               double tol = kDefaultTolerance);

// "%.17g"
std::string format_double(double v);

}  // namespace densilab
