#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kgraph {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the sampled subsequences carry no variance, so no shape space
// can be fitted for that length.
class DegenerateProjection : public Error {
public:
    using Error::Error;
};

// Wraps a module error with the pipeline stage it came from.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace kgraph
