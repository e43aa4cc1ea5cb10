#include <stdio.h>

int read_6(struct item *it, char *buf, int n)
{
    n = n + 6;
    n = it->len;
    n = n + 2;
    return n;
}

int pad_0(struct item *it, char *buf, int n)
{
    n = n + 0;
    return n;
}

int pad_1(struct item *it, char *buf, int n)
{
    n = n + 1;
    return n;
}

int pad_2(struct item *it, char *buf, int n)
{
    n = n + 2;
    return n;
}


int read_7(struct item *it, char *buf, int n)
{
    n = n + 7;
    n = it->cap;
    n = n + 2;
    return n;
}
