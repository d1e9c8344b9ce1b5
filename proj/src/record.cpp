#include "statsum/record.hpp"

#include <cmath>
#include <cstdio>

namespace statsum {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void OutputRecord::add_input(const std::string& key, double value) {
    inputs_.push_back({key, format_double(value), !std::isfinite(value)});
}
void OutputRecord::add_input(const std::string& key, long long value) {
    inputs_.push_back({key, std::to_string(value), false});
}
void OutputRecord::add_input(const std::string& key, const std::string& value) {
    inputs_.push_back({key, value, true});
}
void OutputRecord::add_output(const std::string& key, double value) {
    outputs_.push_back({key, format_double(value), !std::isfinite(value)});
}
void OutputRecord::add_output(const std::string& key, long long value) {
    outputs_.push_back({key, std::to_string(value), false});
}
void OutputRecord::add_output(const std::string& key, const std::string& value) {
    outputs_.push_back({key, value, true});
}

std::string OutputRecord::to_json() const {
    std::string out = "{\"schema_version\":";
    out += std::to_string(kSchemaVersion);
    out += ",\"command\":\"" + command_ + "\"";
    const auto emit = [&out](const char* name, const std::vector<Field>& fields) {
        out += ",\"";
        out += name;
        out += "\":{";
        bool first = true;
        for (const Field& f : fields) {
            if (!first) out += ',';
            first = false;
            out += '"' + f.key + "\":";
            if (f.quoted)
                out += '"' + f.value + '"';
            else
                out += f.value;
        }
        out += '}';
    };
    emit("inputs", inputs_);
    emit("outputs", outputs_);
    out += "}\n";
    return out;
}

std::string OutputRecord::to_csv() const {
    std::string out = "schema_version," + std::to_string(kSchemaVersion) + "\n";
    out += "command," + command_ + "\n";
    for (const Field& f : inputs_) out += "inputs." + f.key + "," + f.value + "\n";
    for (const Field& f : outputs_) out += "outputs." + f.key + "," + f.value + "\n";
    return out;
}

}  // namespace statsum
