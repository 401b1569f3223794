#include "hps/errors.hpp"

#include <sstream>

namespace hps {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::leaf_factorization_failure: return "leaf-factorization-failure";
    case ErrorCode::merge_failure: return "merge-failure";
    case ErrorCode::evaluation_error: return "evaluation-error";
    case ErrorCode::depth_exceeded: return "depth-exceeded";
    case ErrorCode::corrupt_tree: return "corrupt-tree";
    case ErrorCode::precondition_violation: return "precondition-violation";
    case ErrorCode::degenerate_field: return "degenerate-field";
    case ErrorCode::degenerate_reference: return "degenerate-reference";
    case ErrorCode::unbuilt_tree: return "unbuilt-tree";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

std::string Error::format(ErrorCode code, const std::string& msg, int node,
                          int level, const char* stage) {
  std::ostringstream os;
  os << error_code_name(code) << ": " << msg;
  if (node >= 0) os << " [node " << node;
  if (node >= 0 && level >= 0) os << ", level " << level;
  if (node >= 0) os << "]";
  if (stage && *stage) os << " (stage: " << stage << ")";
  return os.str();
}

}  // namespace hps
