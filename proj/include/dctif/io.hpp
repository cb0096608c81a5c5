#pragma once
// Deterministic text formatting for the CSV artifacts. All numeric output
// funnels through these helpers so identical runs produce identical bytes.

#include <cstdio>
#include <string>

namespace dctif {

inline std::string fmt_double(double v, const char* spec = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// The `# config:` echo line every CSV starts with: fully-resolved settings of
// the run, key=value pairs separated by single spaces.
class ConfigEcho {
  public:
    explicit ConfigEcho(std::string command) : line_("# config: cmd=" + std::move(command)) {}
    ConfigEcho& kv(const std::string& key, const std::string& value) {
        line_ += " " + key + "=" + value;
        return *this;
    }
    ConfigEcho& kv(const std::string& key, double value) { return kv(key, fmt_double(value)); }
    ConfigEcho& kv(const std::string& key, long long value) {
        return kv(key, std::to_string(value));
    }
    const std::string& str() const { return line_; }

  private:
    std::string line_;
};

}  // namespace dctif
