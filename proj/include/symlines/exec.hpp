#pragma once

namespace symlines {

// Heavy kernels come in two flavours: a plain serial reference and an
// OpenMP kernel. Both must agree to tight tolerance (see unit tests).
enum class Exec { serial, parallel };

}  // namespace symlines
