import json, csv, re
G=json.load(open('aj_counts.json'))
inter={"Natural Language Processing":["AI"],"Computer Vision":["AI"],"Machine Learning":["AI"],
       "Mocking":["Test Doubles"],"Fixtures":["Test Doubles"],"Matchers":["Test Doubles"],
       "JSON":["Data Formats"],"XML":["Data Formats"],"CSV":["Data Formats"],
       "Messaging":["Communication"],"HTTP Clients":["Communication"]}
out=''
rows=[]
for g,l in G.items():
    for name,c in l:
        slug=re.sub(r'[^a-z0-9]+','-',name.lower()).strip('-')
        for i in range(1,c+1):
            rows.append([f"{slug}-{i:02d}", f"{name} project {i}", "", name, f"Projects listed under {name}", g])
with open(out+'awesome_java.csv','w',newline='') as f:
    w=csv.writer(f, lineterminator='\n'); w.writerow(["project.name","project.desc","project.link","category","category.desc","label"]); w.writerows(rows)
with open(out+'awesome_java_mapping.csv','w',newline='') as f:
    w=csv.writer(f, lineterminator='\n'); w.writerow(["original","path"])
    for g,l in G.items():
        for name,_ in l:
            w.writerow([name, " > ".join(inter.get(name,[])+[g])])
print(len(rows))
