int main() {
  int s, g;
  scanf("%d", &s);
  if (s >= 90)
    g = 4;
  else if (s >= 80)
    g = 3;
  else if (s >= 70)
    g = 2;
  else
    g = 0;
  printf("%d\n", g);
  return 0;
}
