int main() {
  int t, c;
  scanf("%d", &t);
  c = 0;
  if (t < 0)
    c = 1;
  if (t >= 0 && t < 20)
    c = 2;
  if (t >= 20 && t < 30)
    c = 3;
  if (t >= 30)
    c = 4;
  printf("%d\n", c);
  return 0;
}
