// Known-answer values computed ahead of time with an independent HMAC
// implementation (Python's hmac module); they are never regenerated by the
// code under test.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pox::test {

inline std::vector<std::uint8_t> unhex(std::string_view h) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < h.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(std::string(h.substr(i, 2)), nullptr, 16)));
  }
  return out;
}

inline std::vector<std::uint8_t> ascii(std::string_view s) { return {s.begin(), s.end()}; }

inline std::vector<std::uint8_t> repeat(std::uint8_t b, std::size_t n) { return std::vector<std::uint8_t>(n, b); }

struct HmacVector {
  const char* name;
  std::vector<std::uint8_t> key;
  std::vector<std::uint8_t> data;
  const char* mac;  // hex, possibly truncated
};

inline std::vector<HmacVector> rfc4231_vectors() {
  std::vector<std::uint8_t> key25;
  for (std::uint8_t i = 1; i <= 25; ++i) key25.push_back(i);
  return {
      {"tc1", repeat(0x0b, 20), ascii("Hi There"),
       "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"},
      {"tc2", ascii("Jefe"), ascii("what do ya want for nothing?"),
       "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"},
      {"tc3", repeat(0xaa, 20), repeat(0xdd, 50),
       "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"},
      {"tc4", key25, repeat(0xcd, 50), "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b"},
      {"tc5", repeat(0x0c, 20), ascii("Test With Truncation"), "a3b6167473100ee06e0c796c2955552b"},
      {"tc6", repeat(0xaa, 131), ascii("Test Using Larger Than Block-Size Key - Hash Key First"),
       "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54"},
      {"tc7", repeat(0xaa, 131),
       ascii("This is a test using a larger than block-size key and a larger than block-size data. "
             "The key needs to be hashed before being used by the HMAC algorithm."),
       "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2"},
  };
}

// HMAC(0^32, 0^32).
inline constexpr const char* kZeroKdf = "33ad0a1c607ec03b09e6cd9893680ce210adf300aa1f2660e1b22e10f170f92a";
// master = 00 01 .. 1f, chal = a5 * 32.
inline constexpr const char* kCountingKdf = "c017ca9349716df434f7ea50dde47c1640a41885b181764235cb675c78cc85e7";
// Token over ER = 01..08, OR = 2a 00, chal = a5*32, or = [0x2100,0x2101],
// er = [0xE000,0xE007], exec = 1, with the counting master key.
inline constexpr const char* kSampleToken = "79c22d5e4633a252dcbc66ccdba81774190c20301ede87491c33ba6fd071e3bd";

}  // namespace pox::test
