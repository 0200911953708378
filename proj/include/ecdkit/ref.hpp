#pragma once

#include <vector>

#include "ecdkit/matcore.hpp"

namespace ecdkit::ref {

// Straightforward serial implementations of the parallel dense kernels.
// They share no code with the OpenMP paths so they can serve as oracles in
// the test suite and as the baseline in the kernel benchmark.

CMat multiply(const CMat& a, const CMat& b);
CMat tensor(const CMat& a, const CMat& b);
CMat partial_trace(const CMat& m, const DimSplit& split, const std::vector<int>& keep);

}  // namespace ecdkit::ref
