#include "coatscat/hashing.hpp"

#include "coatscat/error.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <system_error>

namespace coatscat {

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw FormatError("not a number: '" + std::string(text) + "'");
  return v;
}

std::string canonical_text(const GeneratrixProfile &profile) {
  std::ostringstream out;
  for (const auto &seg : profile.segments()) {
    if (const auto *l = std::get_if<LineSegment>(&seg)) {
      out << "line " << format_double(l->from.rho) << ' ' << format_double(l->from.z) << ' '
          << format_double(l->to.rho) << ' ' << format_double(l->to.z) << '\n';
    } else {
      const auto &a = std::get<ArcSegment>(seg);
      out << "arc " << format_double(a.center.rho) << ' ' << format_double(a.center.z) << ' '
          << format_double(a.radius) << ' ' << format_double(a.start) << ' ' << format_double(a.end)
          << '\n';
    }
  }
  return out.str();
}

std::string profile_hash(const GeneratrixProfile &profile) { return hex64(fnv1a(canonical_text(profile))); }

} // namespace coatscat
