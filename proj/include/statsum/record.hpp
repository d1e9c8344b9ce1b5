#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace statsum {

/// Formats a double with 17 significant digits ('.' decimal separator,
/// locale-independent); round-trip exact for IEEE doubles. Non-finite
/// values render as inf/-inf/nan.
std::string format_double(double x);

// Machine-readable result of a CLI invocation. Key order is the insertion
// order, so identical invocations serialize byte-identically.
class OutputRecord {
public:
    explicit OutputRecord(std::string command) : command_(std::move(command)) {}

    void add_input(const std::string& key, double value);
    void add_input(const std::string& key, long long value);
    void add_input(const std::string& key, const std::string& value);
    void add_output(const std::string& key, double value);
    void add_output(const std::string& key, long long value);
    void add_output(const std::string& key, const std::string& value);

    std::string to_json() const;
    std::string to_csv() const;

    static constexpr int kSchemaVersion = 1;

private:
    struct Field {
        std::string key;
        std::string value;  // pre-formatted
        bool quoted;        // string-valued (or non-finite number) in JSON
    };
    std::string command_;
    std::vector<Field> inputs_;
    std::vector<Field> outputs_;
};

}  // namespace statsum
