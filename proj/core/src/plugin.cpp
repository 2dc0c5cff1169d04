#include "dipiir/plugin.hpp"

#include "dipiir/error.hpp"
#include "dipiir/tensor_io.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>

namespace dipiir {

namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  ~Fd() { reset(); }
  int get() const noexcept { return fd_; }
  void reset() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

Pipe make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw PluginError(std::string("pipe: ") + std::strerror(errno));
  return Pipe{Fd(fds[0]), Fd(fds[1])};
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct ChildOutput {
  std::string out;
  std::string err;
  int status = 0;
};

ChildOutput run_child(const PluginSpec& spec, const std::string& input) {
  ignore_sigpipe();
  std::vector<std::string> argv_store{spec.executable};
  argv_store.insert(argv_store.end(), spec.args.begin(), spec.args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  Pipe in = make_pipe();
  Pipe out = make_pipe();
  Pipe err = make_pipe();
  const pid_t pid = ::fork();
  if (pid < 0) throw PluginError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in.read.get(), STDIN_FILENO);
    ::dup2(out.write.get(), STDOUT_FILENO);
    ::dup2(err.write.get(), STDERR_FILENO);
    ::execvp(argv[0], argv.data());
    const char msg[] = "plugin: exec failed\n";
    [[maybe_unused]] auto n = ::write(STDERR_FILENO, msg, sizeof(msg) - 1);
    ::_exit(127);
  }
  in.read.reset();
  out.write.reset();
  err.write.reset();
  set_nonblocking(in.write.get());
  set_nonblocking(out.read.get());
  set_nonblocking(err.read.get());

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(spec.timeout_s);
  ChildOutput res;
  std::size_t written = 0;
  if (input.empty()) in.write.reset();
  char buf[65536];
  while (out.read.get() >= 0 || err.read.get() >= 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
      throw PluginTimeoutError("plugin " + spec.executable + " timed out after " + std::to_string(spec.timeout_s) + " s");
    }
    pollfd fds[3];
    nfds_t count = 0;
    auto add = [&](const Fd& fd, short events) {
      if (fd.get() >= 0) fds[count++] = pollfd{fd.get(), events, 0};
    };
    add(in.write, POLLOUT);
    add(out.read, POLLIN);
    add(err.read, POLLIN);
    const int ready = ::poll(fds, count, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw PluginError(std::string("poll: ") + std::strerror(errno));
    }
    for (nfds_t k = 0; k < count; ++k) {
      if (fds[k].revents == 0) continue;
      if (fds[k].fd == in.write.get()) {
        const ssize_t n = ::write(in.write.get(), input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if ((n < 0 && errno != EAGAIN) || written == input.size()) in.write.reset();
      } else {
        const bool is_out = fds[k].fd == out.read.get();
        Fd& fd = is_out ? out.read : err.read;
        const ssize_t n = ::read(fd.get(), buf, sizeof(buf));
        if (n > 0)
          (is_out ? res.out : res.err).append(buf, static_cast<std::size_t>(n));
        else if (n == 0 || errno != EAGAIN)
          fd.reset();
      }
    }
  }
  in.write.reset();
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  res.status = status;
  return res;
}

}  // namespace

Vec plugin_denoise(const Vec& v, const PluginSpec& spec) {
  if (!(spec.timeout_s > 0.0)) throw ConfigError("plugin: timeout must be positive");
  if (spec.executable.empty()) throw ConfigError("plugin: no executable given");
  if (spec.expected_len != 0 && v.size() != spec.expected_len)
    throw ShapeError("plugin: input length " + std::to_string(v.size()) + " != expected " +
                     std::to_string(spec.expected_len));
  Tensor in;
  in.dims = spec.shape.empty() ? std::vector<std::uint64_t>{static_cast<std::uint64_t>(v.size())} : spec.shape;
  in.values = v;
  const ChildOutput res = run_child(spec, encode_tensor(in));

  if (!WIFEXITED(res.status) || WEXITSTATUS(res.status) != 0) {
    const std::string how = WIFEXITED(res.status) ? "exited with status " + std::to_string(WEXITSTATUS(res.status))
                                                  : "was killed by signal " + std::to_string(WTERMSIG(res.status));
    throw PluginError("plugin " + spec.executable + " " + how + (res.err.empty() ? "" : ": " + res.err));
  }
  Tensor out;
  try {
    out = decode_tensor(res.out);
  } catch (const ProtocolError& e) {
    throw ProtocolError("plugin " + spec.executable + ": " + e.what());
  }
  if (out.values.size() != v.size())
    throw ProtocolError("plugin " + spec.executable + " returned " + std::to_string(out.values.size()) +
                        " values, expected " + std::to_string(v.size()));
  return std::move(out.values);
}

Denoiser make_plugin_denoiser(const PluginSpec& spec, Domain domain) {
  return Denoiser("plugin:" + spec.executable, domain, [spec](const Vec& v) { return plugin_denoise(v, spec); },
                  {{"timeout_s", spec.timeout_s}});
}

}  // namespace dipiir
