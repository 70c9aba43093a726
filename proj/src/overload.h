#ifndef JUNCTION_SRC_OVERLOAD_H
#define JUNCTION_SRC_OVERLOAD_H

namespace junction::detail {

template <class... Ts> struct Overload : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> Overload (Ts...) -> Overload<Ts...>;

} // namespace junction::detail

#endif
