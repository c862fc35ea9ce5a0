#pragma once

#include <stdexcept>
#include <string>

namespace molphase {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter violated its documented range; carries the field name.
class OutOfRange : public Error {
public:
    explicit OutOfRange(std::string field, const std::string& detail = "")
        : Error("out of range: " + field + (detail.empty() ? "" : " (" + detail + ")")),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class EmptyGrid : public Error {
public:
    EmptyGrid() : Error("empty or non-increasing grid") {}
    explicit EmptyGrid(const std::string& what) : Error(what) {}
};

class EmptyData : public Error {
public:
    explicit EmptyData(const std::string& what) : Error(what) {}
};

class StepTooLarge : public Error {
public:
    explicit StepTooLarge(const std::string& what) : Error(what) {}
};

class ScheduleInvalid : public Error {
public:
    explicit ScheduleInvalid(const std::string& what) : Error(what) {}
};

class ZeroDrive : public Error {
public:
    ZeroDrive() : Error("phase undefined without a probe (rabi = 0)") {}
};

class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& what) : Error(what) {}
};

class NotConverged : public Error {
public:
    explicit NotConverged(const std::string& what) : Error(what) {}
};

class NotFound : public Error {
public:
    explicit NotFound(const std::string& what) : Error(what) {}
};

class IllConditioned : public Error {
public:
    explicit IllConditioned(const std::string& what) : Error(what) {}
};

class DegenerateFit : public Error {
public:
    explicit DegenerateFit(const std::string& what) : Error(what) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

class SingularCovariance : public Error {
public:
    explicit SingularCovariance(const std::string& what) : Error(what) {}
};

}  // namespace molphase
