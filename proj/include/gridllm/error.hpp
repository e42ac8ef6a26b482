#pragma once

#include <stdexcept>
#include <string>

namespace gridllm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A start/goal pose that is out of bounds or not traversable.
class InvalidEndpoint : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class OutOfBounds : public Error {
public:
    using Error::Error;
};

class EmptyPath : public Error {
public:
    EmptyPath() : Error("path has no waypoints") {}
};

}  // namespace gridllm
