#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

// Exit-code contract: 0 success, 2 config, 3 numerical, 4 I/O.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace slowlight
