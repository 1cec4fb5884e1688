#pragma once

namespace soqn {

/// Selects the serial reference path or the OpenMP path of a batch kernel.
/// Both paths produce bit-identical results in identical order.
enum class Execution { Serial, Parallel };

}  // namespace soqn
