int get_age(int alive, struct person *pers, char *context){
int age=0;
if (alive == 1 && pers !=NULL)
    age=pers->age_death - pers->age;
else
    age = pers->age;
return age;
}
