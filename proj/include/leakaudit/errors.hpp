#pragma once

#include <stdexcept>
#include <string>

namespace leakaudit {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad or unreadable input data. The CLI maps these to exit code 2.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

class IoError : public DataError {
public:
    explicit IoError(const std::string& what) : DataError(what) {}
};

class FormatError : public DataError {
public:
    explicit FormatError(const std::string& what) : DataError(what) {}
};

// Foreign-key uniqueness violated in author_profiles.
class DuplicateKeyError : public DataError {
public:
    explicit DuplicateKeyError(const std::string& what) : DataError(what) {}
};

// A (subreddit, trait) pairing has too few members in one class; the
// pairing must be skipped rather than evaluated on a skewed population.
class InsufficientClassError : public DataError {
public:
    explicit InsufficientClassError(const std::string& what) : DataError(what) {}
};

// Train/test split left one side without both classes.
class DegenerateSplitError : public DataError {
public:
    explicit DegenerateSplitError(const std::string& what) : DataError(what) {}
};

// comment_id absent from a precomputed embedding store.
class MissingIdError : public DataError {
public:
    explicit MissingIdError(const std::string& what) : DataError(what) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

// Training diverged (non-finite loss).
class TrainingError : public Error {
public:
    explicit TrainingError(const std::string& what) : Error(what) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

}  // namespace leakaudit
