#pragma once

#include <stdexcept>
#include <string>

namespace mwh {

// Bad configuration: invalid parameter values, malformed config files,
// unknown strategy names. CLI maps this to exit code 1.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dataset ingestion failures. Carries a kind so callers can distinguish
// a missing file from a malformed one.
class data_error : public std::runtime_error {
public:
    enum class kind { missing_file, bad_value, empty_dataset, bad_format };

    data_error(kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    kind error_kind() const { return kind_; }

private:
    kind kind_;
};

// Numeric failure during training (NaN loss, shape mismatch at runtime).
// CLI maps this to exit code 2.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mwh
