// Published validation table embedded verbatim: dropping probabilities for
// UFA and UTA at mu_w = 40, mu_lu = 25, mu_on = mu_off = 0.1, mu_s = 1,
// lambda_w = 5, D = 1, Q = 2, over five LAA arrival rates. The digits are
// protected by an FNV-1a checksum so accidental edits are caught by a test.
#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace laacoex::reference {

inline constexpr int kColumns = 5;
inline constexpr std::array<double, kColumns> kLambdaL = {25, 37, 50, 62.5,
                                                          120};
inline constexpr double kLambdaW = 5;
inline constexpr double kMuW = 40;
inline constexpr double kMuLu = 25;
inline constexpr double kMuOn = 0.1;
inline constexpr double kMuOff = 0.1;
inline constexpr double kMuS = 1;
inline constexpr int kD = 1;
inline constexpr int kQ = 2;

struct Row {
  const char* name;                         // e.g. "ufa_pbl"
  std::array<double, kColumns> analytic;    // published analytic values
  std::array<double, kColumns> simulation;  // published simulation values
  std::array<double, kColumns> error_pct;   // published relative errors (%)
};

inline constexpr std::array<Row, 4> kRows = {{
    {"ufa_pbl",
     {0.250425, 0.409601, 0.532753, 0.614984, 0.792439},
     {0.255031, 0.412148, 0.535449, 0.616789, 0.793422},
     {1.839273, 0.621825, 0.506051, 0.293504, 0.124047}},
    {"ufa_pbw",
     {0.745041, 0.870437, 0.931242, 0.959145, 0.992457},
     {0.743667, 0.870636, 0.929864, 0.958482, 0.991740},
     {0.001844, 0.022862, 0.147974, 0.069124, 0.072245}},
    {"uta_pbl",
     {0.452044, 0.558498, 0.646604, 0.707167, 0.840875},
     {0.415108, 0.527295, 0.624808, 0.692863, 0.841640},
     {8.170886, 5.586949, 3.370842, 2.022719, 0.090977}},
    {"uta_pbw",
     {0.552184, 0.657476, 0.710252, 0.734986, 0.765312},
     {0.584350, 0.698707, 0.750545, 0.766701, 0.760551},
     {5.825232, 6.271103, 5.673057, 4.315048, 0.622099}},
}};

// The published "ufa_pbw" error at lambda_l = 25 (0.001844) does not follow
// the relative-error definition that reproduces every other cell
// (|0.745041 - 0.743667| / 0.745041 * 100 = 0.184419, a factor of 100 off);
// it is treated as a known typo and excluded from error-row comparisons.
inline constexpr int kAnomalousRow = 1;  // ufa_pbw
inline constexpr int kAnomalousCol = 0;  // lambda_l = 25

// Canonical serialization used by the checksum: the published digit strings
// (lambda column, then analytic/simulation/error per row), comma-joined.
inline std::string canonical_serialization() {
  static const char* cells[] = {
      "25", "37", "50", "62.5", "120",
      "0.250425", "0.409601", "0.532753", "0.614984", "0.792439",
      "0.255031", "0.412148", "0.535449", "0.616789", "0.793422",
      "1.839273", "0.621825", "0.506051", "0.293504", "0.124047",
      "0.745041", "0.870437", "0.931242", "0.959145", "0.992457",
      "0.743667", "0.870636", "0.929864", "0.958482", "0.991740",
      "0.001844", "0.022862", "0.147974", "0.069124", "0.072245",
      "0.452044", "0.558498", "0.646604", "0.707167", "0.840875",
      "0.415108", "0.527295", "0.624808", "0.692863", "0.841640",
      "8.170886", "5.586949", "3.370842", "2.022719", "0.090977",
      "0.552184", "0.657476", "0.710252", "0.734986", "0.765312",
      "0.584350", "0.698707", "0.750545", "0.766701", "0.760551",
      "5.825232", "6.271103", "5.673057", "4.315048", "0.622099"};
  std::string out;
  for (const char* c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

inline constexpr std::uint64_t kChecksum = 0x1068f6828f98621bULL;

inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// True when the embedded digit strings still hash to the recorded checksum
// and the parsed doubles agree with the digit strings.
inline bool checksum_ok() {
  if (fnv1a(canonical_serialization()) != kChecksum) return false;
  // Cross-check the numeric arrays against the serialized digits.
  const std::string s = canonical_serialization();
  std::array<double, 65> parsed{};
  std::size_t i = 0, pos = 0;
  while (pos < s.size() && i < parsed.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    parsed[i++] = std::stod(s.substr(pos, next - pos));
    pos = next + 1;
  }
  if (i != parsed.size()) return false;
  for (int c = 0; c < kColumns; ++c)
    if (parsed[c] != kLambdaL[c]) return false;
  for (std::size_t r = 0; r < kRows.size(); ++r)
    for (int c = 0; c < kColumns; ++c) {
      const std::size_t base = 5 + r * 15;
      if (parsed[base + c] != kRows[r].analytic[c]) return false;
      if (parsed[base + 5 + c] != kRows[r].simulation[c]) return false;
      if (parsed[base + 10 + c] != kRows[r].error_pct[c]) return false;
    }
  return true;
}

}  // namespace laacoex::reference
