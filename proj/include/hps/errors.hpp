#pragma once

#include <stdexcept>
#include <string>

namespace hps {

enum class ErrorCode {
  invalid_argument,
  leaf_factorization_failure,
  merge_failure,
  evaluation_error,
  depth_exceeded,
  corrupt_tree,
  precondition_violation,
  degenerate_field,
  degenerate_reference,
  unbuilt_tree,
  config_error,
  io_error,
};

const char* error_code_name(ErrorCode c);

/// Every numerical failure carries the node id, tree level and stage
/// (leaf/merge/solve) where it occurred; -1 where not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg, int node = -1, int level = -1,
        const char* stage = "")
      : std::runtime_error(format(code, msg, node, level, stage)),
        code_(code),
        node_(node),
        level_(level),
        stage_(stage) {}

  ErrorCode code() const { return code_; }
  int node() const { return node_; }
  int level() const { return level_; }
  const std::string& stage() const { return stage_; }

 private:
  static std::string format(ErrorCode code, const std::string& msg, int node,
                            int level, const char* stage);

  ErrorCode code_;
  int node_;
  int level_;
  std::string stage_;
};

}  // namespace hps
