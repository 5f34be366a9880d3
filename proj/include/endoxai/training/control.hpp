#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#ifdef __unix__
#include <poll.h>
#include <unistd.h>
#endif

namespace endoxai::training {

struct Directive {
  enum Kind { kContinue, kStop, kExtend };
  Kind kind = kContinue;
  int extend_epochs = 0;
};

inline std::string trim_copy(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Grammar: `continue` | `stop` | `extend <positive integer>`.
inline std::optional<Directive> parse_directive(const std::string& line) {
  std::istringstream in(trim_copy(line));
  std::string word;
  if (!(in >> word)) return std::nullopt;
  if (word == "continue") {
    if (in >> word) return std::nullopt;
    return Directive{Directive::kContinue, 0};
  }
  if (word == "stop") {
    if (in >> word) return std::nullopt;
    return Directive{Directive::kStop, 0};
  }
  if (word == "extend") {
    long long n = 0;
    if (!(in >> n) || n < 1 || (in >> word)) return std::nullopt;
    return Directive{Directive::kExtend, static_cast<int>(n)};
  }
  return std::nullopt;
}

// Where epoch-boundary prompts go and directives come from. Implementations
// must never block in non-interactive mode.
class ControlChannel {
 public:
  virtual ~ControlChannel() = default;
  virtual bool interactive() const = 0;
  virtual void write(const std::string& text) = 0;
  /// Next input line, or nullopt on timeout / end of input.
  virtual std::optional<std::string> read_line(double timeout_seconds) = 0;
};

/// Automation default: discards output, never produces input.
class NullControlChannel final : public ControlChannel {
 public:
  bool interactive() const override { return false; }
  void write(const std::string&) override {}
  std::optional<std::string> read_line(double) override { return std::nullopt; }
};

/// Deterministic channel over in-memory streams, for scripted runs and tests.
class StreamControlChannel final : public ControlChannel {
 public:
  StreamControlChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  bool interactive() const override { return true; }
  void write(const std::string& text) override { out_ << text; }
  std::optional<std::string> read_line(double) override {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    return line;
  }

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Real terminal channel: prompt on stdout, poll stdin with a timeout so an
/// absent operator never stalls the run.
class StdinControlChannel final : public ControlChannel {
 public:
  bool interactive() const override { return true; }
  void write(const std::string& text) override {
    std::cout << text;
    std::cout.flush();
  }
  std::optional<std::string> read_line(double timeout_seconds) override {
#ifdef __unix__
    struct pollfd pfd = {0, POLLIN, 0};
    int timeout_ms = timeout_seconds < 0 ? -1 : static_cast<int>(timeout_seconds * 1000.0);
    int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc <= 0 || !(pfd.revents & POLLIN)) return std::nullopt;
#endif
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    return line;
  }
};

/// Emit the status line, then collect one directive. Timeouts and
/// non-interactive channels mean `continue`; a malformed line earns one
/// reprompt before defaulting to `continue`.
inline Directive manual_control_prompt(ControlChannel& channel,
                                       const std::string& status_line,
                                       double timeout_seconds) {
  if (!channel.interactive()) return Directive{};
  channel.write(status_line + "\n");
  for (int attempt = 0; attempt < 2; ++attempt) {
    channel.write("directive [continue|stop|extend <n>] > ");
    std::optional<std::string> line = channel.read_line(timeout_seconds);
    if (!line) {
      channel.write("\nno input; continuing\n");
      return Directive{};
    }
    if (auto d = parse_directive(*line)) return *d;
    channel.write("unrecognized directive: " + trim_copy(*line) + "\n");
  }
  channel.write("continuing\n");
  return Directive{};
}

}  // namespace endoxai::training
