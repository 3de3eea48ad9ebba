#pragma once

#include <cstdint>
#include <string>

namespace sgdlab {

// 17 significant digits: enough to round-trip any 64-bit float exactly.
std::string fmt17(double x);

// Streaming JSON builder with caller-controlled key order and fmt17 numbers.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double x);
    JsonWriter& value(std::int64_t x);
    JsonWriter& value_u64(std::uint64_t x);
    JsonWriter& value(bool b);
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s);
    JsonWriter& null();
    JsonWriter& raw(const std::string& fragment);

    const std::string& str() const { return out_; }

  private:
    void comma();
    std::string out_;
    std::string stack_;     // '{' or '[' per open scope
    bool first_ = true;
    bool after_key_ = false;
};

std::string json_escape(const std::string& s);

}  // namespace sgdlab
