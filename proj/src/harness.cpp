#include "gramtao/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "gramtao/errors.hpp"

namespace gramtao {

FailureClass Verdict::failure_class() const {
  switch (kind) {
    case Kind::Pass: return FailureClass::None;
    case Kind::OracleMismatch: return FailureClass::OracleMismatch;
    case Kind::SutCrash: return FailureClass::SutCrash;
    case Kind::SutTimeout: return FailureClass::SutTimeout;
  }
  return FailureClass::None;
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Pass: return "pass";
    case Verdict::Kind::OracleMismatch: return "mismatch";
    case Verdict::Kind::SutCrash: return "crash";
    case Verdict::Kind::SutTimeout: return "timeout";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_i64(const std::string& s, int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

bool consistent(const std::string& actual, const SemValue& expected, bool currency) {
  std::string a = trim(actual);
  switch (expected.kind) {
    case SemValue::Kind::Int:
    case SemValue::Kind::Wide: {
      int64_t v;
      return parse_i64(a, v) && v == expected.i;
    }
    case SemValue::Kind::Real: {
      if (currency && !a.empty() && a.front() == '$') a.erase(a.begin());
      double v;
      if (!parse_double(a, v)) return false;
      if (currency) return std::llround(v * 100.0) == std::llround(expected.r * 100.0);
      return std::fabs(v - expected.r) <= std::max(1e-9, 1e-9 * std::fabs(expected.r));
    }
    case SemValue::Kind::Text:
      return a == trim(expected.s);
    case SemValue::Kind::Bool:
      return a == (expected.b ? "true" : "false");
  }
  return false;
}

namespace {

struct Pipe {
  int fds[2] = {-1, -1};
  // CLOEXEC everywhere: concurrent workers fork in parallel, and a child
  // holding another worker's pipe ends would delay that worker's EOF. dup2
  // onto 0/1/2 clears the flag for the child's own copies.
  Pipe() {
    if (pipe2(fds, O_CLOEXEC) != 0) throw HarnessError("pipe() failed");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
  int read_fd() const { return fds[0]; }
  int write_fd() const { return fds[1]; }
};

void set_nonblock(int fd) { fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK); }

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    const char* dir = getenv("TMPDIR");
    std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/gramtao-XXXXXX";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    int fd = mkstemp(buf.data());
    if (fd < 0) throw HarnessError("mkstemp failed");
    path.assign(buf.data());
    ssize_t n = write(fd, contents.data(), contents.size());
    ::close(fd);
    if (n != static_cast<ssize_t>(contents.size())) {
      ::unlink(path.c_str());
      throw HarnessError("cannot write temp input file");
    }
  }
  ~TempFile() { ::unlink(path.c_str()); }
};

struct RunOutput {
  bool timed_out = false;
  int exit_status = 0;
  bool crashed = false;
  std::string out;
};

RunOutput run_process(const SutSpec& sut, const std::string& input) {
  if (sut.command.empty()) throw HarnessError("empty SUT command");
  signal(SIGPIPE, SIG_IGN);

  std::optional<TempFile> temp;
  std::vector<std::string> argv_s = sut.command;
  std::string stdin_data;
  if (sut.input_mode == SutSpec::InputMode::FileArg) {
    temp.emplace(input);
    argv_s.push_back(temp->path);
  } else {
    stdin_data = input;
  }

  std::vector<char*> argv;
  for (std::string& s : argv_s) argv.push_back(s.data());
  argv.push_back(nullptr);

  Pipe in, out, err_pipe, status;

  pid_t pid = fork();
  if (pid < 0) throw HarnessError("fork() failed");
  if (pid == 0) {
    dup2(in.read_fd(), 0);
    dup2(out.write_fd(), 1);
    dup2(err_pipe.write_fd(), 2);
    execvp(argv[0], argv.data());
    int err = errno;
    ssize_t ignored = write(status.write_fd(), &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }

  in.close_read();
  out.close_write();
  err_pipe.close_write();
  status.close_write();

  int exec_errno = 0;
  if (read(status.read_fd(), &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
    waitpid(pid, nullptr, 0);
    throw HarnessError("cannot execute '" + sut.command[0] + "': " + strerror(exec_errno));
  }
  status.close_read();

  set_nonblock(in.write_fd());
  set_nonblock(out.read_fd());
  set_nonblock(err_pipe.read_fd());

  RunOutput result;
  std::size_t written = 0;
  bool stdin_open = true;
  if (stdin_data.empty()) {
    in.close_write();
    stdin_open = false;
  }

  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(sut.timeout_ms);
  char buf[8192];
  bool out_open = true;
  bool err_open = true;

  while (out_open || err_open || stdin_open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      result.timed_out = true;
      return result;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1);

    pollfd fds[3];
    nfds_t n = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out_open) {
      out_slot = static_cast<int>(n);
      fds[n++] = {out.read_fd(), POLLIN, 0};
    }
    if (err_open) {
      err_slot = static_cast<int>(n);
      fds[n++] = {err_pipe.read_fd(), POLLIN, 0};
    }
    if (stdin_open) {
      in_slot = static_cast<int>(n);
      fds[n++] = {in.write_fd(), POLLOUT, 0};
    }
    int rc = poll(fds, n, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw HarnessError("poll() failed");
    }
    if (rc == 0) continue;

    if (out_slot >= 0 && (fds[out_slot].revents & (POLLIN | POLLHUP))) {
      ssize_t got = read(out.read_fd(), buf, sizeof(buf));
      if (got > 0)
        result.out.append(buf, static_cast<std::size_t>(got));
      else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR))
        out_open = false;
    }
    if (err_slot >= 0 && (fds[err_slot].revents & (POLLIN | POLLHUP))) {
      ssize_t got = read(err_pipe.read_fd(), buf, sizeof(buf));  // drained, not kept
      if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR)) err_open = false;
    }
    if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t put = write(in.write_fd(), stdin_data.data() + written, stdin_data.size() - written);
      if (put > 0) {
        written += static_cast<std::size_t>(put);
      } else if (put < 0 && errno != EAGAIN && errno != EINTR) {
        written = stdin_data.size();  // receiver is gone
      }
      if (written >= stdin_data.size()) {
        in.close_write();
        stdin_open = false;
      }
    }
  }

  int status_code = 0;
  while (waitpid(pid, &status_code, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status_code)) {
    result.exit_status = WEXITSTATUS(status_code);
    result.crashed = result.exit_status != 0;
  } else if (WIFSIGNALED(status_code)) {
    result.exit_status = 128 + WTERMSIG(status_code);
    result.crashed = true;
  }
  return result;
}

std::string last_nonempty_line(const std::string& s) {
  std::size_t end = s.size();
  while (end > 0) {
    std::size_t start = s.rfind('\n', end - 1);
    std::size_t from = start == std::string::npos ? 0 : start + 1;
    std::string line = trim(s.substr(from, end - from));
    if (!line.empty()) return line;
    if (start == std::string::npos) break;
    end = start;
  }
  return {};
}

}  // namespace

Verdict run_text(const SutSpec& sut, const std::string& text, const SemValue& expected,
                 bool currency) {
  std::string input = text;
  if (input.empty() || input.back() != '\n') input += '\n';
  RunOutput r = run_process(sut, input);

  Verdict v;
  v.expected = expected;
  if (r.timed_out) {
    v.kind = Verdict::Kind::SutTimeout;
    return v;
  }
  v.actual = last_nonempty_line(r.out);
  v.exit_status = r.exit_status;
  if (r.crashed) {
    v.kind = Verdict::Kind::SutCrash;
    return v;
  }
  v.kind = consistent(v.actual, expected, currency) ? Verdict::Kind::Pass
                                                    : Verdict::Kind::OracleMismatch;
  return v;
}

Verdict run_one(const SutSpec& sut, const TestArtifact& artifact, bool currency) {
  if (!artifact.has_oracle())
    throw HarnessError("artifact has no oracle: " + artifact.oracle_error);
  return run_text(sut, artifact.text, *artifact.oracle, currency);
}

FailureChecker make_sut_checker(SutSpec sut, bool currency) {
  return [sut = std::move(sut), currency](const std::string& text, const SemValue& oracle) {
    Verdict v = run_text(sut, text, oracle, currency);
    return CheckOutcome{v.failure_class(), v.actual};
  };
}

std::string corpus_dir() {
  if (const char* env = getenv("GRAMTAO_SUT_DIR"); env && *env) return env;
  std::error_code ec;
  std::filesystem::path exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) return exe.parent_path().string();
  return ".";
}

namespace {

SutSpec corpus_sut(const std::string& name, std::vector<std::string> extra_args = {}) {
  std::string path = corpus_dir() + "/" + name;
  if (!std::filesystem::exists(path))
    throw HarnessError("corpus executable not found: " + path +
                       " (set GRAMTAO_SUT_DIR or build the sut targets)");
  SutSpec s;
  s.command.push_back(path);
  for (std::string& a : extra_args) s.command.push_back(std::move(a));
  return s;
}

}  // namespace

std::vector<CorpusSut> corpus_mutants() {
  std::vector<CorpusSut> out;
  for (int i = 0; i <= 5; ++i) {
    std::string id = "m" + std::to_string(i);
    out.push_back({id, corpus_sut("sut_arith_" + id)});
  }
  return out;
}

SutSpec corpus_parking(const std::vector<std::string>& faults) {
  std::vector<std::string> args;
  for (const std::string& f : faults) args.push_back("--fault=" + f);
  return corpus_sut("sut_parking", std::move(args));
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(n));
  threads.reserve(count);
  for (unsigned i = 0; i < count; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gramtao
