#pragma once

#include <string>
#include <string_view>

namespace parlab {

// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

// Appends "# sha256:<hex of body>" so CSV outputs carry their own checksum.
std::string with_digest_line(std::string body);

}  // namespace parlab
