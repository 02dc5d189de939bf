#include "make/paramgen.hpp"

namespace makekex {

namespace {

// 2000-bit safe prime used by the benchmark and the large built-in
// parameter set.  p and (p-1)/2 are (re)verified on first use.
constexpr const char* kBuiltinPrimeDecimal =
    "100458505468885003633418577656224333902553170484436983273607309963845847"
    "739507115860865964753239939027972338834707903941940188314348678981808910"
    "413754306718965087266944429878241410578991733762502442817585765598816431"
    "431108282071433256273345939973526837788093199292557721204590554061504359"
    "121574222368307048919809010489980961017706729222034791017130925070426893"
    "349814057145812995340991548906078333104951440614482037356443864699967124"
    "299012034397810342312642333550598174454039699165710636052240583294703998"
    "189114479917657125270697086234200442489544474659560583354052797579309573"
    "507121265302226528942789519";

}  // namespace

const SafePrime& builtin_safe_prime() {
  static const SafePrime prime = [] {
    SafePrime sp = safe_prime_from(mpz_class(kBuiltinPrimeDecimal));
    if (sp.bit_length != 2000)
      throw std::logic_error("built-in prime has unexpected size");
    return sp;
  }();
  return prime;
}

}  // namespace makekex
