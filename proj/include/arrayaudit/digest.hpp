#ifndef ARRAYAUDIT_DIGEST_HPP
#define ARRAYAUDIT_DIGEST_HPP

#include <string>
#include <string_view>

namespace arrayaudit {

/** Lower-case hex SHA-256 of `bytes`. */
std::string sha256_hex(std::string_view bytes);

}  // namespace arrayaudit

#endif
