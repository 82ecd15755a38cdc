#pragma once

#include <stdexcept>
#include <string>

namespace modde
{
    /// A Configuration field outside its domain, an unknown preset/strategy/function name.
    struct ConfigurationError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    /// The population is too small for the index draws the mutation needs.
    struct InfeasibleOperatorError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    /// Malformed call arguments (dimension mismatch, empty log set, budget too small, ...).
    struct InputError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct ParseError : std::runtime_error
    {
        ParseError(const std::string& source, std::size_t line, const std::string& what)
            : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line(line)
        {
        }

        std::size_t line;
    };
}
