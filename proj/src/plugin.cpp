#include "chaffkit/plugin.hpp"

#include "chaffkit/codec.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace chaffkit {

struct PluginBackend::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;

  ~Process() {
    if (to_child >= 0) ::close(to_child);
    if (from_child >= 0) ::close(from_child);
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
    }
  }
};

namespace {

void ignore_sigpipe_once() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

PluginBackend::PluginBackend(std::vector<std::string> cmd, std::chrono::milliseconds timeout)
    : cmd_(std::move(cmd)), timeout_(timeout) {
  if (cmd_.empty()) throw std::invalid_argument("plug-in command is empty");
}

PluginBackend::~PluginBackend() = default;

std::string PluginBackend::describe() const {
  std::string out = "plugin:";
  for (std::size_t i = 0; i < cmd_.size(); ++i) out += (i ? " " : "") + cmd_[i];
  return out;
}

void PluginBackend::start() const {
  ignore_sigpipe_once();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw EvalError(EvalErrorKind::PluginProtocol, "pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw EvalError(EvalErrorKind::PluginProtocol, "pipe failed");
  }

  std::vector<char*> argv;
  for (const auto& a : cmd_) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) throw EvalError(EvalErrorKind::PluginProtocol, "fork failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = in_pipe[1];
  proc_->from_child = out_pipe[0];
}

void PluginBackend::stop() const { proc_.reset(); }

Value PluginBackend::call(std::string_view function, std::span<const Value> args) const {
  std::lock_guard lock(mu_);
  if (!proc_) start();

  const long long id = next_id_++;
  json req = {{"id", id}, {"function", std::string(function)}, {"args", json::array()}};
  for (const auto& a : args) req["args"].push_back(value_to_json(a));

  if (!write_all(proc_->to_child, req.dump() + "\n")) {
    stop();
    throw EvalError(EvalErrorKind::PluginProtocol, "plug-in closed its input (" + describe() + ")");
  }

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::string line;
  for (;;) {
    const auto nl = proc_->buffer.find('\n');
    if (nl != std::string::npos) {
      line = proc_->buffer.substr(0, nl);
      proc_->buffer.erase(0, nl + 1);
      break;
    }
    const auto left = std::chrono::ceil<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      stop();
      throw EvalError(EvalErrorKind::PluginTimeout,
                      "no response within " + std::to_string(timeout_.count()) + " ms (" + describe() + ")");
    }
    pollfd pfd{proc_->from_child, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;
    char buf[4096];
    const ssize_t n = ::read(proc_->from_child, buf, sizeof buf);
    if (n <= 0) {
      stop();
      throw EvalError(EvalErrorKind::PluginProtocol, "plug-in exited (" + describe() + ")");
    }
    proc_->buffer.append(buf, static_cast<std::size_t>(n));
  }

  json resp;
  try {
    resp = json::parse(line);
  } catch (const json::exception&) {
    stop();
    throw EvalError(EvalErrorKind::PluginProtocol, "malformed response: " + line);
  }
  if (!resp.is_object() || !resp.contains("id") || resp["id"] != id) {
    stop();
    throw EvalError(EvalErrorKind::PluginProtocol, "response id mismatch: " + line);
  }
  if (resp.contains("error")) {
    const auto& e = resp["error"];
    throw EvalError(EvalErrorKind::Domain, e.is_string() ? e.get<std::string>() : e.dump());
  }
  if (!resp.contains("result")) throw EvalError(EvalErrorKind::PluginProtocol, "response lacks result: " + line);
  try {
    return value_from_json(resp["result"]);
  } catch (const std::exception& ex) {
    throw EvalError(EvalErrorKind::PluginProtocol, std::string("bad result value: ") + ex.what());
  }
}

}  // namespace chaffkit
