int f(void)
{
    return 1; 	
}
/* no newline at end */