#pragma once

#include <cstdio>
#include <sstream>
#include <string>

namespace opeflow::io {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// Minimal deterministic JSON writer: insertion-ordered keys and fixed
/// float formatting, so identical inputs yield bit-identical reports.
class JsonObject {
 public:
  JsonObject& field(const std::string& key, double v) { return raw(key, fmt_double(v)); }
  JsonObject& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
  JsonObject& field(const std::string& key, long v) { return raw(key, std::to_string(v)); }
  JsonObject& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& field(const std::string& key, const std::string& v) {
    return raw(key, quote(v));
  }
  JsonObject& field(const std::string& key, const char* v) { return raw(key, quote(v)); }
  JsonObject& raw(const std::string& key, const std::string& json) {
    if (!first_) os_ << ",";
    first_ = false;
    os_ << quote(key) << ":" << json;
    return *this;
  }
  std::string str() const { return "{" + os_.str() + "}"; }

  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }

 private:
  std::ostringstream os_;
  bool first_ = true;
};

class JsonArray {
 public:
  JsonArray& push_raw(const std::string& json) {
    if (!first_) os_ << ",";
    first_ = false;
    os_ << json;
    return *this;
  }
  JsonArray& push(double v) { return push_raw(fmt_double(v)); }
  JsonArray& push(const std::string& s) { return push_raw(JsonObject::quote(s)); }
  std::string str() const { return "[" + os_.str() + "]"; }

 private:
  std::ostringstream os_;
  bool first_ = true;
};

}  // namespace opeflow::io
