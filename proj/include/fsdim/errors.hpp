#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fsdim {

// Domain failure with a stable name; the CLI prints the name on stderr and
// exits 1, so tests and scripts can match on it.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(const std::string& name, const std::string& detail) {
    throw DomainError(name, detail);
}

}  // namespace fsdim
