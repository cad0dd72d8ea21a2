#pragma once

#include "chaffkit/problem.hpp"

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace chaffkit {

/// Runs an implementation in a child process speaking newline-delimited JSON:
///   request  {"id": n, "function": s, "args": [v...]}
///   response {"id": n, "result": v} | {"id": n, "error": s}
///
/// One request is in flight at a time. A crashed or timed-out child is killed and
/// restarted on the next call; the failing call reports an EvalError.
class PluginBackend final : public Backend {
 public:
  PluginBackend(std::vector<std::string> cmd, std::chrono::milliseconds timeout);
  ~PluginBackend() override;

  PluginBackend(const PluginBackend&) = delete;
  PluginBackend& operator=(const PluginBackend&) = delete;

  Value call(std::string_view function, std::span<const Value> args) const override;
  std::string describe() const override;

  const std::vector<std::string>& command() const { return cmd_; }
  std::chrono::milliseconds timeout() const { return timeout_; }

 private:
  struct Process;

  void start() const;
  void stop() const;

  std::vector<std::string> cmd_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<Process> proc_;
  mutable long long next_id_ = 1;
};

}  // namespace chaffkit
