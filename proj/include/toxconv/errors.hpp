#pragma once

#include <stdexcept>
#include <string>

namespace toxconv {

// Base of every error raised by the library. `kind()` is a stable token the
// CLI prints so scripts can tell failures apart.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define TOXCONV_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(#Name, what) {}    \
    }

TOXCONV_DEFINE_ERROR(InvalidArgument);
TOXCONV_DEFINE_ERROR(InvalidTree);
TOXCONV_DEFINE_ERROR(MissingSnapshotStore);
TOXCONV_DEFINE_ERROR(UnreadableInput);
TOXCONV_DEFINE_ERROR(SchemaViolation);
TOXCONV_DEFINE_ERROR(DegenerateGold);
TOXCONV_DEFINE_ERROR(InsufficientData);
TOXCONV_DEFINE_ERROR(SizeTooSmall);
TOXCONV_DEFINE_ERROR(UndefinedMixing);
TOXCONV_DEFINE_ERROR(ZeroVariance);
TOXCONV_DEFINE_ERROR(NoToxicTweets);
TOXCONV_DEFINE_ERROR(EmptyPrefix);
TOXCONV_DEFINE_ERROR(UnknownParent);
TOXCONV_DEFINE_ERROR(CatalogMismatch);
TOXCONV_DEFINE_ERROR(NoQualifyingBuckets);
TOXCONV_DEFINE_ERROR(SingleClass);
TOXCONV_DEFINE_ERROR(EmptyData);
TOXCONV_DEFINE_ERROR(TooFewGroups);
TOXCONV_DEFINE_ERROR(InvalidConfig);
TOXCONV_DEFINE_ERROR(ScorerFailure);

#undef TOXCONV_DEFINE_ERROR

}  // namespace toxconv
