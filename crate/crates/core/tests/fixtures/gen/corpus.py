import os, random, shutil, csv
root='corpus'
shutil.rmtree(root, ignore_errors=True)
V={
 'JSON':dict(shared=['parse','token','reader','document','node','syntax','scanner','buffer'],own=['json','array','object','member','number','literal','pretty','quote']),
 'XML':dict(shared=['parse','token','reader','document','node','syntax','scanner','buffer'],own=['xml','element','attribute','namespace','schema','entity','sax','cdata']),
 'HTTP Clients':dict(shared=['request','response','header','connection','status','body','uri','payload'],own=['client','pool','retry','timeout','proxy','socket','redirect','cookie']),
 'REST Frameworks':dict(shared=['request','response','header','connection','status','body','uri','payload'],own=['resource','endpoint','route','handler','controller','filter','media','produces']),
 'Testing Frameworks':dict(shared=['expectation','fixture','assertion','failure','report','scenario','outcome','check'],own=['runner','suite','case','before','after','listener','tag','timer']),
 'Mocking':dict(shared=['expectation','fixture','assertion','failure','report','scenario','outcome','check'],own=['mock','stub','spy','invocation','answer','matcher','verify','captor']),
}
P={
 'JSON':['json-lite','json-stream','json-schema','json-bind'],
 'XML':['xml-sax','xml-dom','xml-path'],
 'HTTP Clients':['http-fetch','http-pool','http-async','http-retry'],
 'REST Frameworks':['rest-route','rest-kit','rest-doc'],
 'Testing Frameworks':['test-runner','test-suite','test-assert'],
 'Mocking':['mock-core','mock-spy','mock-stub'],
}
common=['value','result','size','index','name','config','context','builder','list','count']
# words shared by two of the three reduced groups
cross={'JSON':['stream','encoding'],'XML':['stream','charset'],
 'HTTP Clients':['stream','encoding','session'],'REST Frameworks':['session','request'],
 'Testing Frameworks':['session','report','charset'],'Mocking':['request','report']}
def cap(w): return w[:1].upper()+w[1:]
def gen_class(rng, cat, proj, n):
  v=V[cat]; pool=v['shared']*2+v['own']*2+common+cross[cat]
  cls=cap(rng.choice(v['own']))+cap(rng.choice(v['shared']))+('Impl' if n else '')
  pkg='org.example.'+proj.replace('-','.')
  lines=[f'package {pkg};','','import java.util.List;','import java.util.ArrayList;','',f'/** {cap(rng.choice(v["own"]))} support for {proj}. */',f'public class {cls} {{']
  fields=[]
  for _ in range(3):
    a,b=rng.sample(pool,2); f=a+cap(b); fields.append(f)
    t=rng.choice(['int','String','List<String>','boolean'])
    init={'int':'0','String':f'"{a} {b}"','List<String>':'new ArrayList<>()','boolean':'false'}[t]
    lines.append(f'    private {t} {f} = {init};')
  lines.append('')
  for m in range(4):
    a,b,c=rng.sample(pool,3); meth=a+cap(b); arg=c+'Value'
    local=rng.choice(pool)+cap(rng.choice(pool))
    lines+= [f'    public int {meth}(String {arg}) {{',
             f'        // {rng.choice(pool)} handling',
             f'        int {local} = {arg}.length();',
             f'        if ({local} > {m+1}) {{',
             f'            {local} = {local} + {fields[m%3] if m%3==0 and False else "1"};',
             f'        }}',
             f'        return {local};',
             f'    }}','']
  lines.append('}')
  return cls,'\n'.join(lines)+'\n'
rng=random.Random(2024)
rows=[]
for cat,projs in P.items():
  for proj in projs:
    d=os.path.join(root,proj,'src','main','java','org','example',*proj.split('-'))
    os.makedirs(d,exist_ok=True)
    for n in range(2):
      cls,src=gen_class(rng,cat,proj,n)
      open(os.path.join(d,cls+'.java'),'w').write(src)
    rows.append(proj)
    
labels={'JSON':'Parser','XML':'Parser','HTTP Clients':'Web','REST Frameworks':'Web','Testing Frameworks':'Testing','Mocking':'Testing'}
with open('corpus_dataset.csv','w',newline='') as f:
  w=csv.writer(f,lineterminator='\n'); w.writerow(['project.name','project.desc','project.link','category','category.desc','label'])
  for cat,projs in P.items():
    for p in projs: w.writerow([p,f'{cat} library {p}','',cat,f'{cat} libraries',cat])
with open('corpus_mapping.csv','w',newline='') as f:
  w=csv.writer(f,lineterminator='\n'); w.writerow(['original','path'])
  for cat in P: w.writerow([cat,labels[cat]])
