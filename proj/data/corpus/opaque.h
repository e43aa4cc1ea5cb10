#ifndef OPAQUE_H
#define OPAQUE_H
#define SQUARE(x) ((x) * (x))
extern int table[];
#endif
