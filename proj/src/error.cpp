#include "qfb/error.hpp"

namespace qfb {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::singular_at_pole: return "SingularAtPole";
    case ErrorCode::non_bipartite_graph: return "NonBipartiteGraph";
    case ErrorCode::loop_singular: return "LoopSingular";
    case ErrorCode::ill_posed_loop: return "IllPosedLoop";
    case ErrorCode::not_real: return "NotReal";
    case ErrorCode::unphysical: return "Unphysical";
    case ErrorCode::not_bogoliubov: return "NotBogoliubov";
    case ErrorCode::unstable_perturbation: return "UnstablePerturbation";
    case ErrorCode::config: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace qfb
