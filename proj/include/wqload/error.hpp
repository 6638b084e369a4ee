#pragma once

#include <stdexcept>
#include <string>

namespace wqload {

/// Failure raised by any module. `code()` is a short stable tag such as
/// "grid-too-short"; `module()` names the module that raised it.
class Error : public std::runtime_error
{
public:
    Error(std::string module, std::string code, const std::string& detail = {})
        : std::runtime_error(module + ": " + code + (detail.empty() ? "" : ": " + detail)),
          module_(std::move(module)), code_(std::move(code))
    {}

    const std::string& module() const noexcept { return module_; }
    const std::string& code() const noexcept { return code_; }

private:
    std::string module_;
    std::string code_;
};

} // namespace wqload
