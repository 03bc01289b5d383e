#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sfc {

// Lowercases ASCII and splits on every byte that is not an ASCII letter or
// digit. Bytes >= 0x80 are kept inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

}  // namespace sfc
