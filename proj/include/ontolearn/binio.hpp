#pragma once

// Little-endian framing shared by the embedding store and head checkpoints:
// 8-byte magic, u32 header length, UTF-8 JSON header, then binary payload.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ontolearn/error.hpp"

namespace ontolearn::binio {

template <typename UInt>
void write_le(std::ostream& out, UInt v) {
  char buf[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(buf, sizeof(UInt));
}

inline void write_f32(std::ostream& out, float f) {
  write_le(out, std::bit_cast<std::uint32_t>(f));
}

// Reads exactly n bytes or throws DataError(`what`).
inline void read_exact(std::istream& in, char* dst, std::size_t n,
                       const std::string& what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw DataError(what);
}

template <typename UInt>
UInt read_le(std::istream& in, const std::string& what) {
  unsigned char buf[sizeof(UInt)];
  read_exact(in, reinterpret_cast<char*>(buf), sizeof(UInt), what);
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    v |= static_cast<UInt>(buf[i]) << (8 * i);
  }
  return v;
}

inline float read_f32(std::istream& in, const std::string& what) {
  return std::bit_cast<float>(read_le<std::uint32_t>(in, what));
}

inline void write_preamble(std::ostream& out, std::string_view magic,
                           const nlohmann::ordered_json& header) {
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
  const std::string h = header.dump();
  write_le(out, static_cast<std::uint32_t>(h.size()));
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
}

inline nlohmann::ordered_json read_preamble(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  in.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (static_cast<std::size_t>(in.gcount()) != magic.size() || got != magic) {
    throw DataError("bad magic");
  }
  const auto len = read_le<std::uint32_t>(in, "truncated header");
  std::string h(len, '\0');
  read_exact(in, h.data(), len, "truncated header");
  try {
    auto j = nlohmann::ordered_json::parse(h);
    if (!j.is_object()) throw DataError("header is not a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error&) {
    throw DataError("malformed header JSON");
  }
}

inline bool at_eof(std::istream& in) {
  return in.peek() == std::char_traits<char>::eof();
}

}  // namespace ontolearn::binio
