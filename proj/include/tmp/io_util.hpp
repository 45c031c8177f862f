#ifndef TMP_IO_UTIL_HPP
#define TMP_IO_UTIL_HPP

// Small deterministic I/O helpers shared by the serializers and the CLI.

#include <cstdint>
#include <string>
#include <string_view>

namespace tmp {

// Decimal text for a double with up to 15 significant digits, via
// std::to_chars: locale-independent, '.' decimal separator, no trailing
// zero noise, bitwise-reproducible for equal inputs. NaN renders as "nan",
// infinities as "inf"/"-inf".
std::string format_sig15(double value);

// FNV-1a 64-bit hash (used to fingerprint config files in run manifests).
std::uint64_t fnv1a64(std::string_view bytes);

// Lower-case hex rendering of a 64-bit hash, zero-padded to 16 digits.
std::string hex64(std::uint64_t value);

// Whole-file read; throws ConfigError when the file cannot be opened.
std::string read_text_file(const std::string& path);

// Whole-file write (LF endings are the caller's responsibility; nothing is
// transformed). Throws ComputationError when the file cannot be written.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace tmp

#endif  // TMP_IO_UTIL_HPP
