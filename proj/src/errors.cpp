#include "tsfrac/errors.hpp"

namespace tsfrac {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::point_not_in_scale: return "PointNotInScale";
    case errc::not_in_kappa: return "NotInKappa";
    case errc::no_point_on_side: return "NoPointOnSide";
    case errc::pow_undefined: return "PowUndefined";
    case errc::domain_error: return "DomainError";
    case errc::parse_error: return "ParseError";
    case errc::degenerate_denominator: return "DegenerateDenominator";
    case errc::limit_not_converged: return "LimitNotConverged";
    case errc::side_disagreement: return "SideDisagreement";
    case errc::higher_order_unavailable: return "HigherOrderUnavailable";
    case errc::zero_at_point: return "ZeroAtPoint";
    case errc::empty_point_list: return "EmptyPointList";
    case errc::invalid_scale: return "InvalidScale";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

bool is_input_error(errc code) noexcept {
  switch (code) {
    case errc::point_not_in_scale:
    case errc::not_in_kappa:
    case errc::parse_error:
    case errc::empty_point_list:
    case errc::invalid_scale:
    case errc::invalid_argument:
      return true;
    default:
      return false;
  }
}

}  // namespace tsfrac
