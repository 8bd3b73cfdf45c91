#ifndef R1MP_VERSION_HPP
#define R1MP_VERSION_HPP

#define R1MP_VERSION "0.1.0"

#endif  // R1MP_VERSION_HPP
